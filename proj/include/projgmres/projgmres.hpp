/// \file projgmres/projgmres.hpp
/// \brief Umbrella header.

#ifndef PROJGMRES_PROJGMRES_HPP
#define PROJGMRES_PROJGMRES_HPP

#include "projgmres/sparse.hpp"
#include "projgmres/dense.hpp"
#include "projgmres/matrix_market.hpp"
#include "projgmres/arnoldi.hpp"
#include "projgmres/config.hpp"
#include "projgmres/gmres.hpp"
#include "projgmres/projection.hpp"
#include "projgmres/lookback.hpp"
#include "projgmres/accelerated.hpp"
#include "projgmres/bench.hpp"

#endif  // PROJGMRES_PROJGMRES_HPP
