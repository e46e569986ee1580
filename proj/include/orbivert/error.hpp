#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace orbivert {

enum class ErrorCode {
    NotSymmetric,
    NotPositiveDefinite,
    NotEven,
    DimensionMismatch,
    NotIsometry,
    OrderCapExceeded,
    InconsistentShape,
    DegenerateGram,
    Overflow,
    ModeMismatch,
    ZeroLeading,
    NotUnimodular,
    NonProjectedShift,
    TailTooLarge,
    LevelCapExceeded,
    NegativeCycle,
    ShapeRankMismatch,
    InconsistentTrend,
    SpacingMismatch,
    WeightMismatch,
    Parse,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotEven: return "NotEven";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotIsometry: return "NotIsometry";
    case ErrorCode::OrderCapExceeded: return "OrderCapExceeded";
    case ErrorCode::InconsistentShape: return "InconsistentShape";
    case ErrorCode::DegenerateGram: return "DegenerateGram";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::ZeroLeading: return "ZeroLeading";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::NonProjectedShift: return "NonProjectedShift";
    case ErrorCode::TailTooLarge: return "TailTooLarge";
    case ErrorCode::LevelCapExceeded: return "LevelCapExceeded";
    case ErrorCode::NegativeCycle: return "NegativeCycle";
    case ErrorCode::ShapeRankMismatch: return "ShapeRankMismatch";
    case ErrorCode::InconsistentTrend: return "InconsistentTrend";
    case ErrorCode::SpacingMismatch: return "SpacingMismatch";
    case ErrorCode::WeightMismatch: return "WeightMismatch";
    case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

// Every failure raised by the library carries a machine-readable code; the
// CLI maps codes onto exit statuses.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

    // Validation problems vs. numeric ones (tail bounds).
    bool is_numeric() const noexcept { return code_ == ErrorCode::TailTooLarge; }

private:
    ErrorCode code_;
};

// Short form of a floating-point value for diagnostics.
inline std::string format_number(double x)
{
    std::ostringstream s;
    s.precision(4);
    s << x;
    return s.str();
}

} // namespace orbivert
