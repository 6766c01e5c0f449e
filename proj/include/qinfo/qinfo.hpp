#ifndef QINFO_QINFO_HPP
#define QINFO_QINFO_HPP

#include "qinfo/detector.hpp"
#include "qinfo/dynamics.hpp"
#include "qinfo/entropy.hpp"
#include "qinfo/errors.hpp"
#include "qinfo/infocore.hpp"
#include "qinfo/io.hpp"
#include "qinfo/random_source.hpp"
#include "qinfo/signal.hpp"
#include "qinfo/stochastic.hpp"

#endif  // QINFO_QINFO_HPP
