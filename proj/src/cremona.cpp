#include "atlas/cremona.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "atlas/errors.hpp"

namespace atlas::cremona {

std::string EllipticCurveRecord::label() const {
    return std::to_string(conductor) + cls + std::to_string(number);
}

i64 EllipticCurveRecord::discriminant() const {
    __int128 b2v = b2(), b4v = b4(), b6v = b6(), b8v = b8();
    __int128 d = -b2v * b2v * b8v - 8 * b4v * b4v * b4v - 27 * b6v * b6v +
                 9 * b2v * b4v * b6v;
    const __int128 hi = __int128(0x7fffffffffffffffLL);
    if (d > hi || d < -hi)
        throw InternalInconsistency("discriminant overflow for " + label());
    return (i64)d;
}

namespace {

i64 mod(i64 a, i64 p) {
    a %= p;
    return a < 0 ? a + p : a;
}

bool on_curve(const EllipticCurveRecord& E, i64 x, i64 y, i64 p) {
    i64 lhs = mod(y * y + E.a[0] * x * y + E.a[2] * y, p);
    i64 rhs = mod(((x + E.a[1]) * x + E.a[3]) * x + E.a[4], p);
    return lhs == rhs;
}

}  // namespace

Database Database::parse(std::istream& in) {
    Database db;
    std::set<std::string> labels;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string tok;
        std::vector<std::string> toks;
        while (ss >> tok) toks.push_back(tok);
        if (toks.empty()) continue;
        // the bracketed list may contain internal spaces; rejoin
        std::vector<std::string> fields;
        for (std::size_t i = 0; i < toks.size(); ++i) {
            if (!toks[i].empty() && toks[i].front() == '[' &&
                toks[i].find(']') == std::string::npos) {
                std::string joined = toks[i];
                while (++i < toks.size()) {
                    joined += toks[i];
                    if (toks[i].find(']') != std::string::npos) break;
                }
                fields.push_back(joined);
            } else {
                fields.push_back(toks[i]);
            }
        }
        if (fields.size() != 6)
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected 6 fields, got " +
                             std::to_string(fields.size()));
        EllipticCurveRecord rec;
        try {
            rec.conductor = std::stoll(fields[0]);
            for (char& ch : fields[1]) ch = (char)std::toupper((unsigned char)ch);
            rec.cls = fields[1];
            rec.number = std::stoi(fields[2]);
            const std::string& br = fields[3];
            if (br.size() < 2 || br.front() != '[' || br.back() != ']')
                throw ParseError("bad a-invariant list");
            std::string inner = br.substr(1, br.size() - 2);
            std::replace(inner.begin(), inner.end(), ',', ' ');
            std::istringstream as(inner);
            int got = 0;
            i64 v;
            while (as >> v) {
                if (got >= 5) throw ParseError("too many a-invariants");
                rec.a[got++] = v;
            }
            if (got != 5) throw ParseError("expected 5 a-invariants");
            rec.rank = std::stoll(fields[4]);
            rec.torsion = std::stoll(fields[5]);
        } catch (const ParseError&) {
            throw ParseError("line " + std::to_string(lineno) + ": malformed row");
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(lineno) + ": malformed row");
        }
        if (rec.conductor < 1 || rec.cls.empty() || rec.number < 1 ||
            rec.rank < 0 || rec.torsion < 1)
            throw ParseError("line " + std::to_string(lineno) + ": malformed row");
        if (rec.discriminant() == 0)
            throw ParseError("line " + std::to_string(lineno) +
                             ": singular equation for " + rec.label());
        if (!labels.insert(rec.label()).second)
            throw DuplicateLabel(rec.label());
        db.curves.push_back(std::move(rec));
    }
    return db;
}

Database Database::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadInput("cannot open curve database: " + path);
    return parse(in);
}

bool Database::has_conductor(i64 N) const {
    return std::any_of(curves.begin(), curves.end(),
                       [&](const auto& c) { return c.conductor == N; });
}

std::vector<const EllipticCurveRecord*> Database::at_conductor(i64 N) const {
    std::vector<const EllipticCurveRecord*> out;
    for (const auto& c : curves)
        if (c.conductor == N) out.push_back(&c);
    return out;
}

std::vector<std::string> Database::classes_at(i64 N) const {
    std::vector<std::string> out;
    for (const auto& c : curves)
        if (c.conductor == N &&
            std::find(out.begin(), out.end(), c.cls) == out.end())
            out.push_back(c.cls);
    return out;
}

std::vector<const EllipticCurveRecord*> Database::curves_in_class(
    i64 N, const std::string& cls) const {
    std::vector<const EllipticCurveRecord*> out;
    for (const auto& c : curves)
        if (c.conductor == N && c.cls == cls) out.push_back(&c);
    return out;
}

const EllipticCurveRecord* Database::find(i64 N, const std::string& cls,
                                          int number) const {
    for (const auto& c : curves)
        if (c.conductor == N && c.cls == cls && c.number == number) return &c;
    return nullptr;
}

std::string Database::serialize() const {
    std::ostringstream os;
    for (const auto& c : curves) {
        os << c.conductor << ' ' << c.cls << ' ' << c.number << " [" << c.a[0]
           << ',' << c.a[1] << ',' << c.a[2] << ',' << c.a[3] << ',' << c.a[4]
           << "] " << c.rank << ' ' << c.torsion << '\n';
    }
    return os.str();
}

i64 ap(const EllipticCurveRecord& E, i64 p) {
    if (!arith::is_prime(p)) throw BadInput("ap: p must be prime");
    if (E.discriminant() % p == 0)
        throw BadReduction(E.label() + " has bad reduction at " + std::to_string(p));
    i64 count = 1;  // point at infinity
    if (p == 2) {
        for (i64 x = 0; x < 2; ++x)
            for (i64 y = 0; y < 2; ++y)
                if (on_curve(E, x, y, 2)) ++count;
    } else {
        // complete the square: z^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
        i64 b2v = E.b2(), b4v = E.b4(), b6v = E.b6();
        for (i64 x = 0; x < p; ++x) {
            i64 g = mod(((4 * x + b2v) * x + 2 * b4v) * x + b6v, p);
            count += 1 + arith::kronecker(g, p);
        }
    }
    return p + 1 - count;
}

int ap_multiplicative(const EllipticCurveRecord& E, i64 p) {
    if (E.conductor % p != 0)
        throw NotMultiplicative(E.label() + " has good reduction at " +
                                std::to_string(p));
    if (E.discriminant() % p != 0)
        throw InternalInconsistency(E.label() + ": conductor divisible by " +
                                    std::to_string(p) + " but discriminant is not");
    // count smooth points of the reduced curve; #C_ns(F_p) = p - a_p
    i64 smooth = 1;  // infinity is always smooth
    i64 singular = 0;
    for (i64 x = 0; x < p; ++x) {
        for (i64 y = 0; y < p; ++y) {
            if (!on_curve(E, x, y, p)) continue;
            i64 fy = mod(2 * y + E.a[0] * x + E.a[2], p);
            i64 fx = mod(E.a[0] * y - (3 * x * x + 2 * E.a[1] * x + E.a[3]), p);
            if (fx == 0 && fy == 0)
                ++singular;
            else
                ++smooth;
        }
    }
    if (singular != 1)
        throw NotMultiplicative(E.label() + ": reduction at " + std::to_string(p) +
                                " is not a single node");
    i64 a = p - smooth;
    if (a != 1 && a != -1)
        throw InternalInconsistency(E.label() + ": nonsemistable count at " +
                                    std::to_string(p));
    return (int)a;
}

int al_sign(const EllipticCurveRecord& E, i64 p) {
    return -ap_multiplicative(E, p);
}

KodairaSymbol multiplicative_type(const EllipticCurveRecord& E, i64 p) {
    if (E.conductor % p != 0)
        throw NotMultiplicative(E.label() + " has good reduction at " +
                                std::to_string(p));
    i64 d = E.discriminant();
    i64 n = 0;
    while (d % p == 0) {
        d /= p;
        ++n;
    }
    if (n < 1)
        throw InternalInconsistency(E.label() + ": no discriminant valuation at " +
                                    std::to_string(p));
    return KodairaSymbol{n};
}

}  // namespace atlas::cremona
