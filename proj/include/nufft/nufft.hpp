#pragma once

#include "nufft/fft.hpp"
#include "nufft/special.hpp"
#include "nufft/lowrank.hpp"
#include "nufft/oracle.hpp"
#include "nufft/transforms.hpp"
#include "nufft/inverse.hpp"
#include "nufft/transform2d.hpp"
