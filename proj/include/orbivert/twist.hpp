#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include <boost/multiprecision/integer.hpp>

#include "error.hpp"
#include "lattice.hpp"
#include "linalg.hpp"
#include "qseries.hpp"
#include "rational.hpp"

namespace orbivert {

// g = sigma_h nu^ for a standard lift nu^ of nu, with h replaced by its
// projection onto the fixed space (g is conjugate to sigma_{pi(h)} nu^).
class TwistDatum {
public:
    TwistDatum(IntegralLattice lattice, LatticeIsometry nu, const RationalVector& h)
        : lattice_(std::move(lattice)), nu_(std::move(nu))
    {
        if (h.size() != lattice_.rank())
            throw Error(ErrorCode::DimensionMismatch, "shift has " + std::to_string(h.size()) +
                                                          " coordinates, lattice rank is " +
                                                          std::to_string(lattice_.rank()));
        shape_ = frame_shape(lattice_, nu_);
        fixed_ = fixed_point_data(lattice_, nu_);
        h_ = fixed_.project(h);
        doubling_ = order_doubling(lattice_, nu_);
        lift_order_ = doubling_ ? 2 * nu_.order() : nu_.order();
        shift_order_ = to_int64(linalg::common_denominator(h_));
        g_order_ = static_cast<unsigned>(to_int64(lcm(Integer(lift_order_), Integer(shift_order_))));
        if (!(to_rational(nu_.matrix()) * h_ == h_))
            throw Error(ErrorCode::NonProjectedShift, "projected shift is not fixed by the isometry");
    }

    static TwistDatum make(const IntegralLattice& lattice, const IntMatrix& m, const RationalVector& h,
                           unsigned order_cap = default_order_cap)
    {
        return TwistDatum(lattice, check_isometry(lattice, m, order_cap), h);
    }

    const IntegralLattice& lattice() const noexcept { return lattice_; }
    const LatticeIsometry& nu() const noexcept { return nu_; }
    const RationalVector& h() const noexcept { return h_; }
    const FrameShape& shape() const noexcept { return shape_; }
    const FixedPointData& fixed() const noexcept { return fixed_; }
    bool doubling() const noexcept { return doubling_; }
    unsigned lift_order() const noexcept { return lift_order_; }
    // Smallest k with k h in L.
    std::int64_t shift_order() const noexcept { return shift_order_; }
    unsigned g_order() const noexcept { return g_order_; }
    bool is_identity() const noexcept { return nu_.is_identity() && shift_order_ == 1; }
    Rational central_charge() const { return Rational(static_cast<long long>(lattice_.rank())); }

    void require_unimodular() const
    {
        if (!lattice_.unimodular())
            throw Error(ErrorCode::NotUnimodular, "lattice '" + lattice_.name() + "' has determinant " +
                                                      lattice_.det().str() + "; V_L is not holomorphic");
    }

    // Dimension of the module on which the twisted lattice vectors act:
    // sqrt(prod_t t^{b_t} / det L^nu). Integral for unimodular L.
    Integer defect_dimension() const
    {
        require_unimodular();
        Rational p = 1;
        for (auto [t, bt] : shape_.exponents) {
            Rational f = bt >= 0 ? Rational(t) : Rational(1, t);
            for (long long i = 0; i < (bt >= 0 ? bt : -bt); ++i)
                p *= f;
        }
        Integer d = 1;
        if (fixed_.fixed_rank() > 0) {
            auto ldl = linalg::bareiss_ldl(fixed_.fixed_gram.cast<Integer>());
            d = ldl.minors.back();
        }
        p /= Rational(d);
        const Integer n = num(p), r = boost::multiprecision::sqrt(n);
        if (den(p) != 1 || r * r != n)
            throw Error(ErrorCode::InconsistentShape, "prod t^b_t / det L^nu = " + to_string(p) + " is not a square");
        return r;
    }

private:
    IntegralLattice lattice_;
    LatticeIsometry nu_;
    RationalVector h_;
    FrameShape shape_;
    FixedPointData fixed_;
    bool doubling_ = false;
    unsigned lift_order_ = 1;
    std::int64_t shift_order_ = 1;
    unsigned g_order_ = 1;
};

enum class TraceKind { id_id, id_g, g_id };

inline std::string_view to_string(TraceKind k) noexcept
{
    switch (k) {
    case TraceKind::id_id: return "id_id";
    case TraceKind::id_g: return "id_g";
    case TraceKind::g_id: return "g_id";
    }
    return "unknown";
}

// A twisted trace function q-expansion, q^{-c/24} included.
struct TraceFunction {
    PuiseuxSeries series;
    TraceKind kind = TraceKind::id_id;
    Rational rho;
    Rational central_charge;
    unsigned g_order = 1;
};

} // namespace orbivert
