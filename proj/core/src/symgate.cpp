#include "accthr/symgate.hpp"

#include "accthr/errors.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace accthr {

namespace {

constexpr std::int64_t kSmallLimit = std::int64_t{1} << 62;

std::int64_t clamp64(const BigInt& v) {
    if (v >= kSmallLimit) return kSmallLimit;
    if (v <= -kSmallLimit) return -kSmallLimit;
    return v.convert_to<std::int64_t>();
}

}  // namespace

SumPredicate SumPredicate::intervals(std::vector<std::pair<BigInt, BigInt>> ranges) {
    std::erase_if(ranges, [](const auto& r) { return r.first > r.second; });
    std::sort(ranges.begin(), ranges.end());
    SumPredicate p;
    for (auto& r : ranges) {
        if (!p.ranges_.empty() && r.first <= p.ranges_.back().second + 1) {
            if (r.second > p.ranges_.back().second) p.ranges_.back().second = r.second;
        } else {
            p.ranges_.push_back(std::move(r));
        }
    }
    for (const auto& r : p.ranges_) p.ranges64_.emplace_back(clamp64(r.first), clamp64(r.second));
    return p;
}

SumPredicate SumPredicate::from_table(const std::vector<std::uint8_t>& table) {
    std::vector<std::pair<BigInt, BigInt>> ranges;
    for (std::size_t v = 0; v < table.size(); ++v) {
        if (table[v] == 0) continue;
        std::size_t e = v;
        while (e + 1 < table.size() && table[e + 1] != 0) ++e;
        ranges.emplace_back(BigInt(v), BigInt(e));
        v = e;
    }
    return intervals(std::move(ranges));
}

SumPredicate SumPredicate::at_least(const BigInt& threshold, const BigInt& domain_max) {
    return intervals({{threshold < 0 ? BigInt(0) : threshold, domain_max}});
}

SumPredicate SumPredicate::all() { return SumPredicate().complement(); }

SumPredicate SumPredicate::digitwise(BigInt base, std::vector<SumPredicate> digits) {
    if (base < 2) throw InvalidInput("digit-wise predicate needs base >= 2");
    SumPredicate p;
    p.digitwise_ = true;
    p.base_ = std::move(base);
    p.base64_ = p.base_ < kSmallLimit ? p.base_.convert_to<std::int64_t>() : 0;
    p.digits_ = std::move(digits);
    return p;
}

SumPredicate SumPredicate::complement() const {
    SumPredicate p = *this;
    p.negated_ = !negated_;
    return p;
}

SumPredicate SumPredicate::shifted(const BigInt& offset) const {
    if (offset == 0) return *this;
    SumPredicate p;
    if (!digitwise_) {
        std::vector<std::pair<BigInt, BigInt>> moved;
        for (const auto& [lo, hi] : ranges_) moved.emplace_back(lo - offset, hi - offset);
        p = intervals(std::move(moved));
    } else {
        std::vector<SumPredicate> digits;
        BigInt rest = offset;
        for (const auto& d : digits_) {
            digits.push_back(d.shifted(rest % base_));
            rest /= base_;
        }
        // An offset beyond the top digit block can never be matched.
        if (rest != 0) digits.assign(digits_.size(), SumPredicate());
        p = digitwise(base_, std::move(digits));
    }
    p.negated_ = negated_;
    return p;
}

bool SumPredicate::accepts(const BigInt& v) const {
    bool result = false;
    if (!digitwise_) {
        auto it = std::upper_bound(ranges_.begin(), ranges_.end(), v,
                                   [](const BigInt& x, const auto& r) { return x < r.first; });
        result = it != ranges_.begin() && v <= std::prev(it)->second;
    } else {
        BigInt rest = v;
        result = true;
        for (const auto& d : digits_) {
            const BigInt digit = rest % base_;
            rest /= base_;
            if (!d.accepts(digit)) {
                result = false;
                break;
            }
        }
        if (result && rest != 0) result = false;
    }
    return result != negated_;
}

bool SumPredicate::accepts(std::int64_t v) const {
    bool result = false;
    if (!digitwise_) {
        auto it = std::upper_bound(ranges64_.begin(), ranges64_.end(), v,
                                   [](std::int64_t x, const auto& r) { return x < r.first; });
        result = it != ranges64_.begin() && v <= std::prev(it)->second;
    } else if (base64_ == 0) {
        // Every small value is a single low digit.
        result = !digits_.empty() && digits_[0].accepts(v);
        for (std::size_t i = 1; result && i < digits_.size(); ++i) result = digits_[i].accepts(std::int64_t{0});
    } else {
        std::int64_t rest = v;
        result = true;
        for (const auto& d : digits_) {
            if (!d.accepts(rest % base64_)) {
                result = false;
                break;
            }
            rest /= base64_;
        }
        if (result && rest != 0) result = false;
    }
    return result != negated_;
}

// ---------------------------------------------------------------- gates

GeneralizedSymGate::GeneralizedSymGate(std::vector<WeightedLiteral> wires, SumPredicate predicate)
    : wires_(std::move(wires)), predicate_(std::move(predicate)) {
    for (const auto& w : wires_) {
        if (w.weight <= 0) throw InvalidInput("generalized gate weights must be positive");
        domain_max_ += w.weight;
    }
    small_ = domain_max_ < kSmallLimit;
}

GeneralizedSymGate GeneralizedSymGate::constant(bool value) {
    return GeneralizedSymGate({}, value ? SumPredicate::all() : SumPredicate());
}

GeneralizedSymGate GeneralizedSymGate::literal(Literal lit) {
    return GeneralizedSymGate({{lit, BigInt(1)}}, SumPredicate::from_table({0, 1}));
}

BigInt GeneralizedSymGate::weighted_sum(std::uint64_t assignment) const {
    BigInt sum = 0;
    for (const auto& w : wires_) {
        const bool x = ((assignment >> w.literal.input) & 1U) != 0;
        if (x != w.literal.negated) sum += w.weight;
    }
    return sum;
}

bool GeneralizedSymGate::eval(std::uint64_t assignment) const {
    if (small_) {
        std::int64_t sum = 0;
        for (const auto& w : wires_) {
            const bool x = ((assignment >> w.literal.input) & 1U) != 0;
            if (x != w.literal.negated) sum += w.weight.convert_to<std::int64_t>();
        }
        return predicate_.accepts(sum);
    }
    return predicate_.accepts(weighted_sum(assignment));
}

GeneralizedSymGate GeneralizedSymGate::complemented() const {
    GeneralizedSymGate g = *this;
    g.predicate_ = predicate_.complement();
    return g;
}

GeneralizedSymGate GeneralizedSymGate::restricted(std::span<const int> fixed) const {
    std::vector<std::size_t> remap(fixed.size(), 0);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < fixed.size(); ++i)
        if (fixed[i] < 0) remap[i] = kept++;
    BigInt offset = 0;
    std::vector<WeightedLiteral> free_wires;
    for (const auto& w : wires_) {
        const std::size_t in = w.literal.input;
        if (in >= fixed.size()) throw InvalidInput("restriction does not cover input " + std::to_string(in + 1));
        if (fixed[in] < 0) {
            free_wires.push_back({{remap[in], w.literal.negated}, w.weight});
        } else if ((fixed[in] != 0) != w.literal.negated) {
            offset += w.weight;
        }
    }
    return {std::move(free_wires), predicate_.shifted(offset)};
}

HalfSums half_sums(const GeneralizedSymGate& g, std::size_t first, std::size_t count) {
    if (count > 30) throw CapExceeded("half too large for enumeration");
    const std::size_t size = std::size_t{1} << count;
    HalfSums out;
    out.index.resize(size);
    if (g.fits_int64()) {
        std::int64_t base = 0;
        std::vector<std::int64_t> delta(count, 0);
        for (const auto& w : g.wires()) {
            const auto in = w.literal.input;
            if (in < first || in >= first + count) continue;
            const auto wt = w.weight.convert_to<std::int64_t>();
            if (w.literal.negated) {
                base += wt;
                delta[in - first] -= wt;
            } else {
                delta[in - first] += wt;
            }
        }
        std::vector<std::int64_t> sums(size);
        sums[0] = base;
        for (std::size_t i = 1; i < size; ++i) {
            const auto b = static_cast<std::size_t>(std::countr_zero(i));
            sums[i] = sums[i & (i - 1)] + delta[b];
        }
        std::vector<std::int64_t> distinct = sums;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (std::size_t i = 0; i < size; ++i)
            out.index[i] = static_cast<std::uint32_t>(
                std::lower_bound(distinct.begin(), distinct.end(), sums[i]) - distinct.begin());
        out.values.assign(distinct.begin(), distinct.end());
        return out;
    }
    BigInt base = 0;
    std::vector<BigInt> delta(count, BigInt(0));
    for (const auto& w : g.wires()) {
        const auto in = w.literal.input;
        if (in < first || in >= first + count) continue;
        if (w.literal.negated) {
            base += w.weight;
            delta[in - first] -= w.weight;
        } else {
            delta[in - first] += w.weight;
        }
    }
    std::vector<BigInt> sums(size);
    sums[0] = base;
    for (std::size_t i = 1; i < size; ++i) {
        const auto b = static_cast<std::size_t>(std::countr_zero(i));
        sums[i] = sums[i & (i - 1)] + delta[b];
    }
    std::vector<BigInt> distinct = sums;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (std::size_t i = 0; i < size; ++i)
        out.index[i] =
            static_cast<std::uint32_t>(std::lower_bound(distinct.begin(), distinct.end(), sums[i]) - distinct.begin());
    out.values = std::move(distinct);
    return out;
}

namespace {

constexpr std::int64_t kDigitTableLimit = std::int64_t{1} << 20;

// Digits of v in base b (b fits a machine word), least significant first; returns whether
// anything is left above the top digit.
bool split_digits(const BigInt& v, std::int64_t b, std::size_t count, std::int64_t* out) {
    if (v < kSmallLimit) {
        auto rest = v.convert_to<std::int64_t>();
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = rest % b;
            rest /= b;
        }
        return rest != 0;
    }
    BigInt rest = v;
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = static_cast<BigInt>(rest % b).convert_to<std::int64_t>();
        rest /= b;
    }
    return rest != 0;
}

}  // namespace

std::vector<std::uint8_t> accept_pairs(const GeneralizedSymGate& g, const HalfSums& left, const HalfSums& right) {
    const SumPredicate& p = g.predicate();
    const std::size_t nl = left.values.size();
    const std::size_t nr = right.values.size();
    std::vector<std::uint8_t> accept(nl * nr, 0);
    const bool flat_digits = p.is_digitwise() && p.base() <= kDigitTableLimit &&
                             std::none_of(p.digits().begin(), p.digits().end(),
                                          [](const SumPredicate& d) { return d.is_digitwise(); });
    if (flat_digits) {
        // Left and right digit blocks add without carrying, so each digit is judged on
        // its own: split every half-sum once and look digit sums up in per-digit tables.
        const auto base = p.base().convert_to<std::int64_t>();
        const std::size_t t = p.digits().size();
        std::vector<std::vector<std::uint8_t>> tables(t);
        for (std::size_t i = 0; i < t; ++i) {
            tables[i].resize(static_cast<std::size_t>(base));
            for (std::int64_t v = 0; v < base; ++v) tables[i][static_cast<std::size_t>(v)] = p.digits()[i].accepts(v) ? 1 : 0;
        }
        std::vector<std::int64_t> ld(nl * t);
        std::vector<std::int64_t> rd(nr * t);
        std::vector<std::uint8_t> lhigh(nl);
        std::vector<std::uint8_t> rhigh(nr);
        for (std::size_t a = 0; a < nl; ++a) lhigh[a] = split_digits(left.values[a], base, t, &ld[a * t]) ? 1 : 0;
        for (std::size_t b = 0; b < nr; ++b) rhigh[b] = split_digits(right.values[b], base, t, &rd[b * t]) ? 1 : 0;
        for (std::size_t a = 0; a < nl; ++a)
            for (std::size_t b = 0; b < nr; ++b) {
                bool ok = lhigh[a] == 0 && rhigh[b] == 0;
                bool carried = false;
                for (std::size_t i = 0; i < t && ok; ++i) {
                    const std::int64_t digit = ld[a * t + i] + rd[b * t + i];
                    if (digit >= base) {
                        carried = true;
                        break;
                    }
                    ok = tables[i][static_cast<std::size_t>(digit)] != 0;
                }
                if (carried)
                    accept[a * nr + b] = p.accepts(BigInt(left.values[a] + right.values[b])) ? 1 : 0;
                else
                    accept[a * nr + b] = ok != p.negated() ? 1 : 0;
            }
        return accept;
    }
    if (g.fits_int64()) {
        for (std::size_t a = 0; a < nl; ++a) {
            const auto av = left.values[a].convert_to<std::int64_t>();
            for (std::size_t b = 0; b < nr; ++b)
                accept[a * nr + b] = p.accepts(av + right.values[b].convert_to<std::int64_t>()) ? 1 : 0;
        }
        return accept;
    }
    for (std::size_t a = 0; a < nl; ++a)
        for (std::size_t b = 0; b < nr; ++b) accept[a * nr + b] = p.accepts(BigInt(left.values[a] + right.values[b])) ? 1 : 0;
    return accept;
}

namespace {

TruthTable batch_eval_plain(const GeneralizedSymGate& g, int n) {
    const auto left_bits = static_cast<std::size_t>((n + 1) / 2);
    const auto right_bits = static_cast<std::size_t>(n) - left_bits;
    const HalfSums left = half_sums(g, 0, left_bits);
    const HalfSums right = half_sums(g, left_bits, right_bits);
    const std::size_t nr = right.values.size();
    const std::vector<std::uint8_t> accept = accept_pairs(g, left, right);
    TruthTable table(n);
    const std::size_t lsize = std::size_t{1} << left_bits;
    const std::size_t rsize = std::size_t{1} << right_bits;
    for (std::size_t j = 0; j < rsize; ++j) {
        const std::size_t rb = right.index[j];
        for (std::size_t i = 0; i < lsize; ++i)
            if (accept[static_cast<std::size_t>(left.index[i]) * nr + rb] != 0) table.set(j * lsize + i, true);
    }
    return table;
}

}  // namespace

TruthTable batch_eval(const GeneralizedSymGate& g, int n) {
    const SumPredicate& p = g.predicate();
    if (!p.is_digitwise()) return batch_eval_plain(g, n);
    // Split the collapsed weights back into their base-B component gates.
    const std::size_t t = p.digits().size();
    std::vector<std::vector<WeightedLiteral>> parts(t);
    for (const auto& w : g.wires()) {
        BigInt rest = w.weight;
        for (std::size_t i = 0; i < t && rest != 0; ++i) {
            const BigInt digit = rest % p.base();
            rest /= p.base();
            if (digit != 0) parts[i].push_back({w.literal, digit});
        }
        if (rest != 0) throw InvalidInput("collapsed weight exceeds its digit count");
    }
    TruthTable table(n);
    table.bits().invert();
    for (std::size_t i = 0; i < t; ++i) {
        const GeneralizedSymGate part(std::move(parts[i]), p.digits()[i]);
        table.bits() &= batch_eval(part, n).bits();
    }
    if (p.negated()) table.bits().invert();
    return table;
}

bool SymSymCircuit::eval(std::uint64_t assignment) const {
    std::size_t count = 0;
    for (const auto& g : bottom) count += g.eval(assignment) ? 1 : 0;
    return top[count] != 0;
}

void SymSymCircuit::validate() const {
    if (top.size() != bottom.size() + 1) throw InvalidInput("top table must have one entry per count");
    for (const auto& g : bottom)
        for (const auto& w : g.wires())
            if (w.literal.input >= static_cast<std::size_t>(n)) throw InvalidInput("bottom gate reads a missing input");
}

}  // namespace accthr
