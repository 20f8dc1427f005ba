#pragma once

#include "n360/branch_generator.hpp"
#include "n360/branch_points.hpp"
#include "n360/diversity.hpp"
#include "n360/error.hpp"
#include "n360/geometry.hpp"
#include "n360/graph.hpp"
#include "n360/ingest.hpp"
#include "n360/narration.hpp"
#include "n360/pipeline.hpp"
#include "n360/planner.hpp"
#include "n360/simulate.hpp"
