#pragma once

#include <string>
#include <vector>

#include "lfcov/scenario.hpp"

namespace lfcov {

// Twin-panel metrics figure: tracking error and aggregate coverage error
// against time.
std::string render_metrics_svg(const std::vector<StepRecord>& records);

struct FrameContext {
    const Scenario* scenario = nullptr;      // obstacles, topology, cell dims
    const ReferencePath* path = nullptr;     // dashed reference curve
    std::vector<Vec2> head_trajectory;       // solid head-midpoint curve
};

// One simulation frame: leaders as circles joined by springs, obstacles
// filled, followers as dots, reference path dashed, head trajectory solid,
// plus a virtual-domain inset with the Voronoi cells when the scenario is
// available.
std::string render_frame_svg(const StepRecord& record, const FrameContext& ctx);

}  // namespace lfcov
