#ifndef QWALK_QWALK_HPP
#define QWALK_QWALK_HPP

#include "qwalk/error.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/corona.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/number_theory.hpp"
#include "qwalk/closed_form.hpp"
#include "qwalk/transfer.hpp"
#include "qwalk/serialize.hpp"

#endif  // QWALK_QWALK_HPP
