#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrm/sphere.hpp"

namespace qrm {

enum class PointClass {
    Unclassified,
    Attracting,
    Superattracting,
    Repelling,
    IndifferentIrrational,
    ParabolicAttracting,
    ParabolicIndifferent,
    ParabolicRepelling,
};

inline const char* point_class_name(PointClass c) {
    switch (c) {
        case PointClass::Unclassified: return "unclassified";
        case PointClass::Attracting: return "attracting";
        case PointClass::Superattracting: return "superattracting";
        case PointClass::Repelling: return "repelling";
        case PointClass::IndifferentIrrational: return "indifferent-irrational";
        case PointClass::ParabolicAttracting: return "parabolic-attracting";
        case PointClass::ParabolicIndifferent: return "parabolic-indifferent";
        case PointClass::ParabolicRepelling: return "parabolic-repelling";
    }
    return "unclassified";
}

inline bool is_parabolic(PointClass c) {
    return c == PointClass::ParabolicAttracting || c == PointClass::ParabolicIndifferent ||
           c == PointClass::ParabolicRepelling;
}

/// A fixed point with its local invariants. fixed_points() fills location,
/// eigenvalue and multiplicity; the contour machinery fills index,
/// degeneracy and class.
struct FixedPointRecord {
    SpherePoint location;
    Complex eigenvalue{0.0};
    int multiplicity = 1;
    std::optional<Complex> index;
    std::optional<int> degeneracy;
    PointClass cls = PointClass::Unclassified;
};

/// A periodic cycle viewed through its invariants as a fixed point of g^n.
struct CycleRecord {
    int period = 1;
    std::vector<SpherePoint> points;
    Complex eigenvalue{0.0};
    std::optional<Complex> index;
    std::optional<int> degeneracy;
    PointClass cls = PointClass::Unclassified;
};

}  // namespace qrm
