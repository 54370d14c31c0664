#pragma once

#include <cmath>

namespace uavnet {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double squared_distance(Point a, Point b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// Closed axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
    bool contains(const Rect& r) const {
        return r.x0 >= x0 && r.x1 <= x1 && r.y0 >= y0 && r.y1 <= y1;
    }

    friend bool operator==(const Rect&, const Rect&) = default;
};

struct Area {
    double width = 0.0;
    double height = 0.0;

    Rect bounds() const { return {0.0, 0.0, width, height}; }
    bool contains(Point p) const { return bounds().contains(p); }

    // Lower-left quadrant {0 < x <= w/2, 0 < y <= h/2}.
    Rect section1() const { return {0.0, 0.0, width / 2.0, height / 2.0}; }

    friend bool operator==(const Area&, const Area&) = default;
};

} // namespace uavnet
