#pragma once

#include "twospin/error.hpp"
#include "twospin/graph_gen.hpp"
#include "twospin/io.hpp"
#include "twospin/log_math.hpp"
#include "twospin/marginal.hpp"
#include "twospin/oracle.hpp"
#include "twospin/partition.hpp"
#include "twospin/saw_tree.hpp"
#include "twospin/spin_core.hpp"
