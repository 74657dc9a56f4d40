#pragma once

#include "spgemm/common.hpp"
#include "spgemm/csc.hpp"
#include "spgemm/dcsc.hpp"
#include "spgemm/generators.hpp"
#include "spgemm/grid.hpp"
#include "spgemm/kernels.hpp"
#include "spgemm/ledger.hpp"
#include "spgemm/matrix_market.hpp"
#include "spgemm/perfmodel.hpp"
#include "spgemm/psgemm.hpp"
#include "spgemm/semiring.hpp"
#include "spgemm/stats.hpp"
#include "spgemm/triples.hpp"
