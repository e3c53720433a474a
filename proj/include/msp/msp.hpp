#ifndef MSP_MSP_HPP
#define MSP_MSP_HPP

#include "msp/core/errors.hpp"
#include "msp/core/intervals.hpp"
#include "msp/core/rng.hpp"
#include "msp/core/types.hpp"

#include "msp/linalg/cholesky.hpp"
#include "msp/linalg/eigen.hpp"
#include "msp/linalg/lanczos.hpp"
#include "msp/linalg/matrix_market.hpp"
#include "msp/linalg/minres.hpp"
#include "msp/linalg/operator.hpp"
#include "msp/linalg/sym_matrix.hpp"

#include "msp/saddle/block_system.hpp"
#include "msp/saddle/manifest.hpp"
#include "msp/saddle/schur_chain.hpp"
#include "msp/saddle/symmetrize.hpp"

#include "msp/bounds/dsp.hpp"
#include "msp/bounds/perturb.hpp"
#include "msp/bounds/poly.hpp"

#include "msp/pdeco/chebyshev.hpp"
#include "msp/pdeco/experiment.hpp"
#include "msp/pdeco/fem.hpp"
#include "msp/pdeco/kkt.hpp"

#include "msp/experiments/dsp_grid.hpp"
#include "msp/experiments/random_multi.hpp"
#include "msp/experiments/report.hpp"
#include "msp/experiments/tables.hpp"

#endif
