#pragma once

#include <cmath>
#include <stdexcept>

namespace bellman {

/// Parameters of the extremal problem: the BMO-ball radius eps and the
/// power exponent p of the boundary function |s|^p.
struct BellmanParams {
    double eps;
    double p;

    BellmanParams(double eps_, double p_) : eps(eps_), p(p_) {
        if (!std::isfinite(eps) || eps <= 0.0)
            throw std::invalid_argument("BellmanParams: eps must be positive and finite");
        if (!std::isfinite(p))
            throw std::invalid_argument("BellmanParams: p must be finite");
    }
};

/// A point x = (x1, x2) of the parabolic strip
/// Omega_eps = { x : x1^2 <= x2 <= x1^2 + eps^2 }.
struct DomainPoint {
    double x1 = 0.0;
    double x2 = 0.0;
};

/// Extended real for foliation ranges. Infinite endpoints are tags; no
/// floating-point infinity ever enters arithmetic through this type.
struct ExtReal {
    enum class Tag { Finite, MinusInf, PlusInf };
    Tag tag = Tag::Finite;
    double value = 0.0;

    static ExtReal finite(double v) { return ExtReal{Tag::Finite, v}; }
    static ExtReal minus_inf() { return ExtReal{Tag::MinusInf, 0.0}; }
    static ExtReal plus_inf() { return ExtReal{Tag::PlusInf, 0.0}; }
    bool is_finite() const { return tag == Tag::Finite; }
    friend bool operator==(const ExtReal&, const ExtReal&) = default;
};

/// Which canonical subdomain a point falls in under a global candidate's
/// foliation.
enum class BlockKind { LowerBoundary, L0, La, FPlus, FMinus, T };

struct Region {
    BlockKind kind = BlockKind::L0;
    double a = 0.0;   ///< La: tangency abscissa
    int side = 0;     ///< La: +1 or -1 (which corner the chords exit through)
    ExtReal u1;       ///< FPlus/FMinus: lower end of the foliation range
    ExtReal u2;       ///< FPlus/FMinus: upper end of the foliation range
    double u = 0.0;   ///< T: shared lower-boundary abscissa

    friend bool operator==(const Region&, const Region&) = default;
};

/// The four global candidates.
enum class CandidateKind { M, N, P, R };

/// Upper (sup) or lower (inf) Bellman function.
enum class BellmanSide { Upper, Lower };

inline const char* to_string(CandidateKind k) {
    switch (k) {
        case CandidateKind::M: return "M";
        case CandidateKind::N: return "N";
        case CandidateKind::P: return "P";
        case CandidateKind::R: return "R";
    }
    return "?";
}

inline const char* to_string(BlockKind k) {
    switch (k) {
        case BlockKind::LowerBoundary: return "LowerBoundary";
        case BlockKind::L0: return "L0";
        case BlockKind::La: return "La";
        case BlockKind::FPlus: return "FPlus";
        case BlockKind::FMinus: return "FMinus";
        case BlockKind::T: return "T";
    }
    return "?";
}

}  // namespace bellman
