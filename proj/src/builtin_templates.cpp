#include <algorithm>
#include <cmath>
#include <vector>

#include "aerofit/error.hpp"
#include "aerofit/template_store.hpp"

// Stylised frontal stick silhouettes. Coordinates are authored on a 128x128
// canvas and scaled to the requested size.

namespace aerofit {

namespace {

struct Pt {
    double x;
    double y;
};

struct Capsule {
    Pt a;
    Pt b;
    double radius;
};

constexpr double kHead = 11.0;
constexpr double kTorso = 11.0;
constexpr double kArm = 6.5;
constexpr double kLeg = 7.5;
constexpr double kWeight = 7.0;

double segment_distance(Pt p, Pt a, Pt b) {
    const double vx = b.x - a.x;
    const double vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = p.x - (a.x + t * vx);
    const double dy = p.y - (a.y + t * vy);
    return std::sqrt(dx * dx + dy * dy);
}

class Pose {
public:
    Pose& disc(Pt c, double r) { return add({c, c, r}); }
    Pose& limb(Pt a, Pt b, Pt c, double r) {
        add({a, b, r});
        return add({b, c, r});
    }
    Pose& bar(Pt a, Pt b, double r) { return add({a, b, r}); }
    /// Adds the limb and its reflection about the vertical centre line.
    Pose& pair(Pt a, Pt b, Pt c, double r) {
        limb(a, b, c, r);
        return limb(mirror(a), mirror(b), mirror(c), r);
    }
    Pose& weights(Pt hand) {
        disc(hand, kWeight);
        return disc(mirror(hand), kWeight);
    }
    Pose mirrored() const {
        Pose out;
        for (const auto& c : parts_) out.add({mirror(c.a), mirror(c.b), c.radius});
        return out;
    }

    BinaryMask rasterize(int canvas) const {
        const double s = canvas / 128.0;
        BinaryMask m(canvas, canvas);
        for (int y = 0; y < canvas; ++y) {
            for (int x = 0; x < canvas; ++x) {
                const Pt p{(x + 0.5) / s, (y + 0.5) / s};
                for (const auto& c : parts_) {
                    if (segment_distance(p, c.a, c.b) <= c.radius) {
                        m.set(x, y, true);
                        break;
                    }
                }
            }
        }
        return clean_mask(m, 1);
    }

private:
    static Pt mirror(Pt p) { return {128.0 - p.x, p.y}; }
    Pose& add(Capsule c) {
        parts_.push_back(c);
        return *this;
    }
    std::vector<Capsule> parts_;
};

// Upright body with the head and torso lowered by `drop` pixels.
Pose body(double drop = 0.0) {
    Pose p;
    p.disc({64, 20 + drop}, kHead);
    p.bar({64, 38 + drop}, {64, 68 + drop}, kTorso);
    return p;
}

std::vector<Pose> jumping_jack() {
    return {
        body().pair({53, 40}, {50, 58}, {49, 78}, kArm).pair({59, 72}, {59, 95}, {59, 118}, kLeg),
        body().pair({52, 38}, {38, 26}, {24, 14}, kArm).pair({58, 72}, {50, 95}, {42, 118}, kLeg),
        body().pair({52, 38}, {47, 20}, {44, 4}, kArm).pair({58, 72}, {44, 94}, {30, 116}, kLeg),
    };
}

std::vector<Pose> squat() {
    Pose stand = body();
    stand.bar({42, 48}, {86, 48}, kArm).pair({58, 72}, {54, 95}, {51, 118}, kLeg);
    Pose half = body(14);
    half.bar({36, 58}, {92, 58}, kArm).pair({57, 84}, {40, 100}, {46, 118}, kLeg);
    Pose deep = body(28);
    deep.pair({52, 68}, {34, 66}, {15, 64}, kArm).pair({57, 96}, {32, 104}, {42, 120}, kLeg);
    return {stand, half, deep};
}

std::vector<Pose> lateral_flexion() {
    Pose up = body();
    up.pair({52, 38}, {54, 20}, {60, 6}, kArm).pair({58, 72}, {54, 95}, {51, 118}, kLeg);

    Pose lean;
    lean.disc({48, 24}, kHead);
    lean.bar({54, 40}, {62, 68}, kTorso);
    lean.limb({72, 42}, {66, 16}, {46, 8}, kArm);
    lean.limb({46, 44}, {40, 62}, {38, 80}, kArm);
    lean.pair({58, 72}, {54, 95}, {51, 118}, kLeg);
    return {up, lean, lean.mirrored()};
}

std::vector<Pose> front_raises() {
    const auto legs = [](Pose p) {
        p.pair({58, 72}, {54, 95}, {51, 118}, kLeg);
        return p;
    };
    Pose down = legs(body());
    down.pair({52, 38}, {42, 56}, {38, 74}, kArm).weights({37, 76});
    Pose mid = legs(body());
    mid.pair({52, 38}, {38, 48}, {25, 58}, kArm).weights({24, 59});
    Pose level = legs(body());
    level.pair({52, 38}, {36, 36}, {19, 34}, kArm).weights({18, 34});
    return {down, mid, level};
}

}  // namespace

TemplateStore builtin_store(int canvas) {
    if (canvas < 64) {
        throw Error(ErrorCode::InvalidArgument, "builtin canvas must be at least 64 pixels");
    }
    const std::vector<std::vector<Pose>> poses = {jumping_jack(), squat(), lateral_flexion(),
                                                  front_raises()};
    const auto catalog = builtin_catalog();
    std::vector<Routine> routines;
    for (std::size_t r = 0; r < catalog.size(); ++r) {
        Routine routine{catalog[r].first, {}};
        for (int s = 1; s <= catalog[r].second; ++s) {
            routine.templates.push_back(Template{make_template_id(routine.name, s), routine.name, s,
                                                 poses[r][static_cast<std::size_t>(s - 1)].rasterize(canvas)});
        }
        routines.push_back(std::move(routine));
    }
    return TemplateStore(std::move(routines));
}

}  // namespace aerofit
