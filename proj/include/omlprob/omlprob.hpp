#pragma once

#include "omlprob/causality.hpp"
#include "omlprob/error.hpp"
#include "omlprob/io.hpp"
#include "omlprob/lattice.hpp"
#include "omlprob/observable.hpp"
#include "omlprob/random.hpp"
#include "omlprob/rational.hpp"
#include "omlprob/smap.hpp"
#include "omlprob/state.hpp"
