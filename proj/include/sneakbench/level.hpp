#pragma once

#include <array>
#include <string>
#include <vector>

#include "sneakbench/gait.hpp"
#include "sneakbench/geometry.hpp"

namespace sneakbench {

// An axis-aligned box footprint with a height. An optional oscillation
// (move/period) slides the footprint back and forth along `move`,
// triangle-shaped, phased by time since level start.
struct ObstacleSpec {
    Rect rect{};
    double height = 2.0;
    Vec2 move{};
    double period = 0.0;

    bool moving() const { return period > 0.0 && (move.x != 0.0 || move.z != 0.0); }
    Rect footprint_at(double t_level) const;
};

struct LaserSpec {
    Vec2 a{};
    Vec2 b{};
    double height = 1.2;  // beam height; crouching under it is free
};

struct GuardWaypoint {
    Vec2 pos{};
    double dwell = 0.0;
    double facing = 0.0;  // radians on the ground plane, 0 = +x, pi/2 = +z
};

struct GuardSpec {
    std::vector<GuardWaypoint> waypoints;
    double move_speed = 1.0;
    double fov_deg = 90.0;
    double view_range = 10.0;
    double eye_height = 1.6;
    // Hearing radius per step intensity; sneak steps are inaudible.
    std::array<double, 3> hear_ranges{0.0, 3.0, 6.0};

    double hear_range(StepIntensity i) const { return hear_ranges[static_cast<int>(i)]; }
};

struct LevelSpec {
    int format_version = 1;
    int id = 0;
    std::string description;
    std::string concept;
    Rect bounds{{0.0, 0.0}, {4.0, 4.0}};
    std::vector<ObstacleSpec> obstacles;
    std::vector<LaserSpec> lasers;
    Vec2 tablet_pos{};
    bool tablet_hidden = false;
    Vec2 teleporter_pos{};
    GuardSpec guard;
};

// Throws InvariantViolationError with the first violated rule.
void validate_level(const LevelSpec& level);

LevelSpec parse_level(const std::string& text, const std::string& source_name);
LevelSpec load_level(const std::string& path);
std::string level_to_toml(const LevelSpec& level);

// All *.toml files in a directory, validated and sorted by id.
std::vector<LevelSpec> load_levels_dir(const std::string& dir);

// Levels directory resolution: $SNEAKBENCH_LEVELS, then ./levels, then the
// location baked in at configure time.
std::string default_levels_dir();

}  // namespace sneakbench
