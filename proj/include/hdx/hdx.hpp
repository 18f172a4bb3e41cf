#pragma once

#include "hdx/error.hpp"
#include "hdx/face.hpp"
#include "hdx/complex.hpp"
#include "hdx/cochain.hpp"
#include "hdx/spectral.hpp"
#include "hdx/level.hpp"
#include "hdx/sampling.hpp"
#include "hdx/theorems.hpp"
#include "hdx/oriented.hpp"
#include "hdx/io.hpp"
