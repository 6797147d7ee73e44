#pragma once

#include "cartan/error.hpp"
#include "cartan/nat_matrix.hpp"
#include "cartan/partitions.hpp"
#include "cartan/matrices.hpp"
#include "cartan/permutations.hpp"
#include "cartan/graphs.hpp"
#include "cartan/classify.hpp"
#include "cartan/json_io.hpp"
