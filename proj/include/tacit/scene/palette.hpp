#pragma once

#include <array>
#include <string_view>
#include <utility>
#include <vector>

#include "tacit/scene/scene.hpp"

// Every color any verifier has to tell apart is a point of the lattice
// {0, 128, 255}^3, so any two of them are at least 127 apart in RGB.
// data/palette.json mirrors these values; a unit test keeps them in sync.
namespace tacit::palette {

inline constexpr Color background_white{255, 255, 255};
inline constexpr Color wall_black{0, 0, 0};
inline constexpr Color neutral_gray{128, 128, 128};
inline constexpr Color path_blue{0, 0, 255};
inline constexpr Color start_green{0, 128, 0};
inline constexpr Color end_red{255, 0, 0};
inline constexpr Color badge_green{0, 128, 0};
inline constexpr Color badge_red{255, 0, 0};
inline constexpr Color mark_red{255, 0, 0};
inline constexpr Color positive_blue{0, 0, 255};
inline constexpr Color negative_red{255, 0, 0};
inline constexpr Color filled_navy{0, 0, 128};

inline constexpr std::array<Color, 5> portal{{
    {255, 128, 0},    // orange
    {255, 0, 255},    // magenta
    {0, 255, 255},    // cyan
    {128, 0, 255},    // purple
    {255, 255, 0},    // yellow
}};

inline constexpr std::array<Color, 10> symbol{{
    {255, 0, 0},      // red
    {255, 128, 0},    // orange
    {255, 255, 0},    // yellow
    {0, 128, 0},      // green
    {0, 255, 255},    // cyan
    {0, 0, 255},      // blue
    {128, 0, 255},    // purple
    {255, 0, 255},    // magenta
    {128, 0, 0},      // brown
    {0, 128, 128},    // teal
}};

inline constexpr std::array<Color, 6> node{{
    {255, 0, 0},      // red
    {0, 0, 255},      // blue
    {255, 255, 0},    // yellow
    {0, 128, 0},      // green
    {255, 0, 255},    // magenta
    {0, 255, 255},    // cyan
}};

inline constexpr std::array<Color, 16> state{{
    {255, 255, 255},  // 0 white
    {0, 0, 0},        // 1 black
    {255, 0, 0},      // 2 red
    {0, 128, 0},      // 3 green
    {0, 0, 255},      // 4 blue
    {255, 255, 0},    // 5 yellow
    {0, 255, 255},    // 6 cyan
    {255, 0, 255},    // 7 magenta
    {255, 128, 0},    // 8 orange
    {128, 0, 255},    // 9 purple
    {128, 128, 128},  // 10 gray
    {128, 0, 0},      // 11 brown
    {0, 0, 128},      // 12 navy
    {0, 128, 128},    // 13 teal
    {128, 128, 0},    // 14 olive
    {255, 128, 255},  // 15 pink
}};

// Isometric face shades (compared by SSIM only, never classified).
inline constexpr Color iso_top{235, 235, 235};
inline constexpr Color iso_left{170, 170, 170};
inline constexpr Color iso_right{95, 95, 95};

// Flat name -> color table, in a fixed order.
std::vector<std::pair<std::string, Color>> named_colors();

// ITU-R 601 luma.
double luma(Color c);

double distance(Color a, Color b);

}  // namespace tacit::palette
