#include "xsgen/factorization.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <utility>

#include "xsgen/errors.hpp"

namespace xsgen {

namespace {

// Largest n for which the 13-base Miller-Rabin set below is a proof.
const mpz_class& deterministic_mr_bound() {
    static const mpz_class bound("3317044064679887385961981");
    return bound;
}

constexpr unsigned long kMrBases[] = {2,  3,  5,  7,  11, 13, 17,
                                      19, 23, 29, 31, 37, 41};

bool miller_rabin(const mpz_class& n) {
    if (n < 2) return false;
    for (unsigned long b : kMrBases) {
        if (n == b) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), b)) return false;
    }
    // n - 1 = 2^s * t with t odd
    mpz_class t = n - 1;
    unsigned long s = mpz_scan1(t.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(t.get_mpz_t(), t.get_mpz_t(), s);
    for (unsigned long b : kMrBases) {
        mpz_class base(b), y;
        mpz_powm(y.get_mpz_t(), base.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
        if (y == 1 || y == n - 1) continue;
        bool witness = true;
        for (unsigned long i = 1; i < s; ++i) {
            y = y * y % n;
            if (y == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

mpz_class pow2_minus_1(unsigned d) {
    mpz_class m;
    mpz_setbit(m.get_mpz_t(), d);
    return m - 1;
}

}  // namespace

bool within_deterministic_mr_range(const mpz_class& n) {
    return n < deterministic_mr_bound();
}

bool is_certified_prime(const mpz_class& n) {
    if (!within_deterministic_mr_range(n)) {
        throw FactorizationError(
            "candidate prime " + n.get_str() +
            " exceeds the deterministic Miller-Rabin range; supply it via a "
            "trusted factor table entry");
    }
    return miller_rabin(n);
}

Factorization::Factorization(unsigned d, std::vector<FactorEntry> factors,
                             bool trusted)
    : d_(d), factors_(std::move(factors)), trusted_(trusted) {
    if (d_ < 1) {
        throw FactorizationError("factorization needs d >= 1");
    }
    mpz_class product = 1;
    const mpz_class* prev = nullptr;
    for (const FactorEntry& entry : factors_) {
        if (entry.exponent < 1) {
            throw FactorizationError("factor exponent must be >= 1");
        }
        if (prev != nullptr && !(*prev < entry.prime)) {
            throw FactorizationError("factor primes must be strictly increasing");
        }
        prev = &entry.prime;
        if (within_deterministic_mr_range(entry.prime)) {
            if (!miller_rabin(entry.prime)) {
                throw FactorizationError("factor " + entry.prime.get_str() +
                                         " is not prime");
            }
        } else if (!trusted_) {
            throw FactorizationError(
                "factor " + entry.prime.get_str() +
                " exceeds the deterministic primality range and the entry is "
                "not marked trusted");
        }
        for (unsigned i = 0; i < entry.exponent; ++i) {
            product *= entry.prime;
        }
    }
    if (product != pow2_minus_1(d_)) {
        throw FactorizationError("factor product does not equal 2^" +
                                 std::to_string(d_) + " - 1");
    }
}

mpz_class Factorization::modulus() const { return pow2_minus_1(d_); }

mpz_class Factorization::totient() const {
    mpz_class phi = 1;
    for (const FactorEntry& entry : factors_) {
        for (unsigned i = 0; i + 1 < entry.exponent; ++i) {
            phi *= entry.prime;
        }
        phi *= entry.prime - 1;
    }
    return phi;
}

// ---- built-in table ----

namespace {

struct RawFactor {
    std::uint64_t p;
    unsigned e;
};

const std::map<unsigned, std::vector<RawFactor>>& raw_builtin_table() {
    static const auto* table = new std::map<unsigned, std::vector<RawFactor>>{
#include "mersenne_table.inc"
    };
    return *table;
}

}  // namespace

const Factorization* builtin_mersenne_factorization(unsigned d) {
    static const auto* cache = [] {
        auto* m = new std::map<unsigned, Factorization>;
        for (const auto& [dd, raw] : raw_builtin_table()) {
            std::vector<FactorEntry> entries;
            entries.reserve(raw.size());
            for (const RawFactor& rf : raw) {
                entries.push_back(
                    {mpz_class(static_cast<unsigned long>(rf.p)), rf.e});
            }
            m->emplace(dd, Factorization(dd, std::move(entries)));
        }
        return m;
    }();
    const auto it = cache->find(d);
    return it == cache->end() ? nullptr : &it->second;
}

// ---- factor table files ----

namespace {

std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

FactorTable FactorTable::parse(std::istream& in) {
    FactorTable table;
    std::string line;
    unsigned lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = strip(line);
        if (line.empty()) continue;

        const auto colon = line.find(':');
        if (colon == std::string::npos) {
            throw FactorizationError("factor table line " +
                                     std::to_string(lineno) + ": missing ':'");
        }
        unsigned d = 0;
        try {
            std::size_t pos = 0;
            d = static_cast<unsigned>(std::stoul(strip(line.substr(0, colon)), &pos));
        } catch (const std::exception&) {
            throw FactorizationError("factor table line " +
                                     std::to_string(lineno) + ": bad d");
        }

        std::string rhs = strip(line.substr(colon + 1));
        bool trusted = false;
        const std::string kTrusted = "trusted";
        if (rhs.size() >= kTrusted.size() &&
            rhs.compare(rhs.size() - kTrusted.size(), kTrusted.size(),
                        kTrusted) == 0) {
            trusted = true;
            rhs = strip(rhs.substr(0, rhs.size() - kTrusted.size()));
        }

        std::vector<FactorEntry> entries;
        if (rhs != "1") {  // "d: 1" denotes the empty factorization (d = 1)
            std::stringstream ss(rhs);
            std::string item;
            while (std::getline(ss, item, '*')) {
                item = strip(item);
                if (item.empty()) {
                    throw FactorizationError("factor table line " +
                                             std::to_string(lineno) +
                                             ": empty factor");
                }
                std::string pstr = item;
                unsigned exp = 1;
                const auto caret = item.find('^');
                if (caret != std::string::npos) {
                    pstr = strip(item.substr(0, caret));
                    try {
                        exp = static_cast<unsigned>(
                            std::stoul(strip(item.substr(caret + 1))));
                    } catch (const std::exception&) {
                        throw FactorizationError("factor table line " +
                                                 std::to_string(lineno) +
                                                 ": bad exponent");
                    }
                }
                mpz_class p;
                if (mpz_set_str(p.get_mpz_t(), pstr.c_str(), 10) != 0) {
                    throw FactorizationError("factor table line " +
                                             std::to_string(lineno) +
                                             ": bad prime '" + pstr + "'");
                }
                entries.push_back({std::move(p), exp});
            }
        }
        try {
            table.insert(Factorization(d, std::move(entries), trusted));
        } catch (const FactorizationError& e) {
            throw FactorizationError("factor table line " +
                                     std::to_string(lineno) + ": " + e.what());
        }
    }
    return table;
}

FactorTable FactorTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw FactorizationError("cannot open factor table file: " + path);
    }
    return parse(in);
}

const Factorization* FactorTable::find(unsigned d) const {
    const auto it = entries_.find(d);
    return it == entries_.end() ? nullptr : &it->second;
}

void FactorTable::insert(Factorization f) {
    const unsigned d = f.d();
    entries_.insert_or_assign(d, std::move(f));
}

// ---- factoring ----

namespace {

// Brent-variant Pollard rho with deterministic parameters (x0 = 2 and
// increments c = 1, 2, 3, ...). Returns a nontrivial divisor of composite
// odd n, or 0 when the iteration budget ran out. `budget` counts evaluations
// of the iteration map and is decremented in place.
mpz_class pollard_rho(const mpz_class& n, std::uint64_t& budget) {
    const unsigned long batch = 128;
    for (unsigned long c = 1; budget > 0; ++c) {
        mpz_class x, y = 2, ys, q = 1, g = 1;
        unsigned long r = 1;
        while (g == 1 && budget > 0) {
            x = y;
            for (unsigned long i = 0; i < r && budget > 0; ++i) {
                --budget;
                y = (y * y + c) % n;
            }
            for (unsigned long k = 0; k < r && g == 1 && budget > 0;) {
                ys = y;
                const unsigned long steps = std::min(batch, r - k);
                for (unsigned long i = 0; i < steps && budget > 0; ++i) {
                    --budget;
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                k += steps;
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
            r *= 2;
        }
        if (g == n) {
            // a batch folded several factors together; replay one by one
            g = 1;
            while (g == 1 && budget > 0) {
                --budget;
                ys = (ys * ys + c) % n;
                mpz_class diff = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            }
        }
        if (g != 1 && g != n) {
            return g;
        }
        // g == n: degenerate cycle for this increment, try the next c
    }
    return 0;
}

void factor_into(const mpz_class& n, std::vector<mpz_class>& primes,
                 std::uint64_t& rho_budget) {
    if (n == 1) return;
    if (is_certified_prime(n)) {
        primes.push_back(n);
        return;
    }
    const mpz_class d = pollard_rho(n, rho_budget);
    if (d == 0) {
        throw FactorizationError(
            "factorization unavailable: Pollard rho budget exhausted on " +
            n.get_str());
    }
    factor_into(d, primes, rho_budget);
    factor_into(n / d, primes, rho_budget);
}

}  // namespace

Factorization factor_mersenne(unsigned d, const FactorTable* table,
                              const FactorEffort& effort) {
    if (d < 1) {
        throw FactorizationError("factor_mersenne needs d >= 1");
    }
    if (table != nullptr) {
        if (const Factorization* f = table->find(d)) {
            return *f;
        }
    }
    if (const Factorization* f = builtin_mersenne_factorization(d)) {
        return *f;
    }

    mpz_class n = pow2_minus_1(d);
    std::vector<mpz_class> primes;
    // 2^d - 1 is odd; trial divide by odd candidates up to the bound.
    for (std::uint64_t p = 3; p <= effort.trial_division_bound && n > 1;
         p += 2) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) {
            primes.emplace_back(static_cast<unsigned long>(p));
            n /= static_cast<unsigned long>(p);
        }
    }
    std::uint64_t rho_budget = effort.rho_iteration_cap;
    if (n > 1) {
        factor_into(n, primes, rho_budget);
    }

    std::sort(primes.begin(), primes.end());
    std::vector<FactorEntry> entries;
    for (const mpz_class& p : primes) {
        if (!entries.empty() && entries.back().prime == p) {
            ++entries.back().exponent;
        } else {
            entries.push_back({p, 1});
        }
    }
    return Factorization(d, std::move(entries));
}

}  // namespace xsgen
