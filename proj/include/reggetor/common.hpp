#ifndef REGGETOR_COMMON_HPP
#define REGGETOR_COMMON_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace reggetor {

// ---------------------------------------------------------------------------
// Errors

enum class Errc {
    NotClosed,
    OrientationClash,
    DegenerateTet,
    NonManifoldEdge,
    NonManifoldVertex,
    NotAChain,
    SharedEdgeCollision,
    ResampleExhausted,
    DegenerateResult,
    TouchesChain,
    BadDegree,
    ConventionViolation,
    RankDeficit,
    SingularF2Minor,
    NotAcyclic,
    OracleMismatch,
    IndexClash,
    InvalidSpec,
    NotFound,
    ParseError,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NotClosed: return "NotClosed";
        case Errc::OrientationClash: return "OrientationClash";
        case Errc::DegenerateTet: return "DegenerateTet";
        case Errc::NonManifoldEdge: return "NonManifoldEdge";
        case Errc::NonManifoldVertex: return "NonManifoldVertex";
        case Errc::NotAChain: return "NotAChain";
        case Errc::SharedEdgeCollision: return "SharedEdgeCollision";
        case Errc::ResampleExhausted: return "ResampleExhausted";
        case Errc::DegenerateResult: return "DegenerateResult";
        case Errc::TouchesChain: return "TouchesChain";
        case Errc::BadDegree: return "BadDegree";
        case Errc::ConventionViolation: return "ConventionViolation";
        case Errc::RankDeficit: return "RankDeficit";
        case Errc::SingularF2Minor: return "SingularF2Minor";
        case Errc::NotAcyclic: return "NotAcyclic";
        case Errc::OracleMismatch: return "OracleMismatch";
        case Errc::IndexClash: return "IndexClash";
        case Errc::InvalidSpec: return "InvalidSpec";
        case Errc::NotFound: return "NotFound";
        case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

// ---------------------------------------------------------------------------
// Signed log-magnitude numbers. Products in the invariant are accumulated in
// this form so large triangulations cannot overflow a double.

struct LogSigned {
    double logmag = -std::numeric_limits<double>::infinity();
    int sign = 0;  // -1, 0, +1

    static LogSigned one() { return {0.0, 1}; }
    static LogSigned from(double x) {
        if (x == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
        return {std::log(std::abs(x)), x > 0 ? 1 : -1};
    }
    double value() const { return sign == 0 ? 0.0 : sign * std::exp(logmag); }
    bool zero() const { return sign == 0; }

    LogSigned operator*(const LogSigned& o) const {
        if (zero() || o.zero()) return {};
        return {logmag + o.logmag, sign * o.sign};
    }
    LogSigned operator/(const LogSigned& o) const {
        if (zero()) return {};
        if (o.zero()) fail(Errc::NotAcyclic, "division by zero determinant");
        return {logmag - o.logmag, sign * o.sign};
    }
    LogSigned pow(int k) const {
        if (zero()) return k == 0 ? one() : LogSigned{};
        int s = (k % 2 == 0) ? 1 : sign;
        return {logmag * k, s};
    }
    LogSigned negate() const { return {logmag, -sign}; }
};

// ---------------------------------------------------------------------------
// Exact rationals for the closed-form oracles. den == 0 encodes the paper's
// "1/0" situation: the complex is not acyclic and the invariant is infinite.

struct Rational {
    long long num = 0;
    long long den = 1;

    static Rational infinity(int sign = 1) { return Rational{sign >= 0 ? 1 : -1, 0}; }

    Rational() = default;
    Rational(long long n, long long d) : num(n), den(d) { normalize(); }

    bool infinite() const { return den == 0; }
    double value() const {
        if (infinite()) return num >= 0 ? std::numeric_limits<double>::infinity()
                                        : -std::numeric_limits<double>::infinity();
        return double(num) / double(den);
    }
    void normalize() {
        if (den == 0) { num = num >= 0 ? 1 : -1; return; }
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(std::abs(num), den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
};

// ---------------------------------------------------------------------------
// Deterministic RNG helpers. std::uniform_real_distribution is
// implementation-defined, so doubles are derived from raw mt19937_64 output.

inline double unit_double(std::uint64_t bits) {
    return double(bits >> 11) * (1.0 / 9007199254740992.0);  // [0,1)
}

template <class Rng>
double uniform_pm1(Rng& rng) {
    return 2.0 * unit_double(rng()) - 1.0;
}

// Reduce an angle to (-pi, pi].
inline double reduce_angle(double a) {
    const double two_pi = 6.283185307179586476925286766559;
    a = std::fmod(a, two_pi);
    if (a <= -3.14159265358979323846) a += two_pi;
    if (a > 3.14159265358979323846) a -= two_pi;
    return a;
}

}  // namespace reggetor

#endif  // REGGETOR_COMMON_HPP
