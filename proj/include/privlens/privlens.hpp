#pragma once

// Umbrella header: the full toolkit.

#include "privlens/dataset_io.hpp"
#include "privlens/features.hpp"
#include "privlens/geometry.hpp"
#include "privlens/labeling.hpp"
#include "privlens/ml.hpp"
#include "privlens/model.hpp"
#include "privlens/prep.hpp"
#include "privlens/recommend.hpp"
#include "privlens/rng.hpp"
#include "privlens/synth.hpp"
#include "privlens/tree.hpp"
