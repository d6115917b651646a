#ifndef PANELTAIL_PANELTAIL_HPP
#define PANELTAIL_PANELTAIL_HPP

#include "paneltail/acf.hpp"
#include "paneltail/common.hpp"
#include "paneltail/io.hpp"
#include "paneltail/mc.hpp"
#include "paneltail/model.hpp"
#include "paneltail/numeric.hpp"
#include "paneltail/rng.hpp"
#include "paneltail/tailest.hpp"
#include "paneltail/theory.hpp"
#include "paneltail/threshold.hpp"

#endif
