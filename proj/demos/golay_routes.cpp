// PGST preconditions for the two Golay code graphs, from spectral data only.
#include <fstream>
#include <iostream>
#include <sstream>

#include "qwalk/qwalk.hpp"

int main() {
  using namespace qwalk;
  for (const char* name : {"golay_double_coset", "shortened_golay"}) {
    std::ifstream in(std::string(QWALK_DATA_DIR) + "/" + name + ".json");
    std::stringstream ss;
    ss << in.rdbuf();
    const auto data = base_data_from_json(Json::parse(ss.str()));
    const auto pre = pgst_preconditions(data, 0, 1, 2);
    std::cout << name << ": " << pre.criterion() << (pre.ok ? " applies" : " does not apply")
              << ", r^2 + 4(n-1)^2 = " << pre.perron_radicand << '\n';
    std::cout << "  |H(1.0)| on the corona = "
              << std::abs(corona_transfer_entry(data, 0, 1, 1.0, 0, 1)) << '\n';
  }
}
