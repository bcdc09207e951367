#pragma once

namespace relaxcd {

/// Real number extended with tagged infinities, so infinite results never
/// leak into arithmetic as raw IEEE infinities.
class Extended {
public:
    enum class Tag { finite, pos_inf, neg_inf };

    constexpr Extended() = default;
    static constexpr Extended finite(double v) noexcept { return Extended(Tag::finite, v); }
    static constexpr Extended pos_inf() noexcept { return Extended(Tag::pos_inf, 0.0); }
    static constexpr Extended neg_inf() noexcept { return Extended(Tag::neg_inf, 0.0); }

    [[nodiscard]] constexpr Tag tag() const noexcept { return tag_; }
    [[nodiscard]] constexpr bool is_finite() const noexcept { return tag_ == Tag::finite; }
    [[nodiscard]] constexpr bool is_pos_inf() const noexcept { return tag_ == Tag::pos_inf; }
    [[nodiscard]] constexpr bool is_neg_inf() const noexcept { return tag_ == Tag::neg_inf; }

    /// Finite payload; zero for the infinite tags.
    [[nodiscard]] constexpr double value() const noexcept { return value_; }

    friend constexpr bool operator==(const Extended &, const Extended &) = default;

private:
    constexpr Extended(Tag tag, double v) noexcept : tag_(tag), value_(v) {}

    Tag tag_ = Tag::finite;
    double value_ = 0.0;
};

}  // namespace relaxcd
