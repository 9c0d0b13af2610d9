#pragma once

#include "cjsr/blocks.hpp"
#include "cjsr/error.hpp"
#include "cjsr/linalg.hpp"
#include "cjsr/problem.hpp"
#include "cjsr/rational.hpp"
#include "cjsr/spectral.hpp"
#include "cjsr/subshift.hpp"
