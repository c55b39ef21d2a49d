#pragma once

#include "sgdeg/error.hpp"
#include "sgdeg/graph.hpp"
#include "sgdeg/linalg.hpp"
#include "sgdeg/model.hpp"
#include "sgdeg/solver.hpp"
#include "sgdeg/degree.hpp"
#include "sgdeg/builtin.hpp"
#include "sgdeg/checks.hpp"
#include "sgdeg/sweep.hpp"
#include "sgdeg/random.hpp"
