#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace capregion {

enum class Relation { LessEqual, GreaterEqual, Equal };
enum class Sense { Maximize, Minimize };
enum class LPStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LPStatus s) {
    switch (s) {
        case LPStatus::Optimal: return "optimal";
        case LPStatus::Infeasible: return "infeasible";
        case LPStatus::Unbounded: return "unbounded";
    }
    return "?";
}

/// Linear program over nonnegative variables:
///   optimize objective . x  subject to  rows[i] . x (relation) rhs[i],  x >= 0.
struct LPInstance {
    RationalVector objective;
    std::vector<RationalVector> rows;
    std::vector<Relation> relations;
    RationalVector rhs;
    Sense sense = Sense::Maximize;

    std::size_t num_vars() const { return objective.size(); }
    std::size_t num_rows() const { return rows.size(); }

    void add_row(RationalVector coefficients, Relation rel, Rational bound) {
        rows.push_back(std::move(coefficients));
        relations.push_back(rel);
        rhs.push_back(std::move(bound));
    }

    void check_shape() const {
        if (objective.empty()) throw std::invalid_argument("LP needs at least one variable");
        if (rows.size() != relations.size() || rows.size() != rhs.size())
            throw std::invalid_argument("LP row, relation and rhs counts differ");
        for (const auto& r : rows)
            if (r.size() != objective.size()) throw std::invalid_argument("LP row has wrong length");
    }
};

/// `dual` follows the sign convention of the program's Lagrangian dual:
/// for a maximization, y >= 0 on <= rows, y <= 0 on >= rows, A^T y >= c;
/// for a minimization every sign flips and A^T y <= c.
struct LPSolution {
    LPStatus status = LPStatus::Infeasible;
    Rational value;
    RationalVector primal;
    RationalVector dual;

    bool optimal() const { return status == LPStatus::Optimal; }
};

/// Counts solves and certificate checks across the process.
struct LPAudit {
    static inline std::atomic<std::uint64_t> solves{0};
    static inline std::atomic<std::uint64_t> optimal{0};
    static inline std::atomic<std::uint64_t> certified{0};

    static void reset() {
        solves = 0;
        optimal = 0;
        certified = 0;
    }
};

/// Strong-duality audit of an optimal solution. Exact: no tolerances.
inline bool verify_certificate(const LPInstance& lp, const LPSolution& sol) {
    lp.check_shape();
    if (sol.primal.size() != lp.num_vars() || sol.dual.size() != lp.num_rows())
        throw std::invalid_argument("certificate dimension mismatch");
    if (!sol.optimal()) return false;

    const bool maximize = lp.sense == Sense::Maximize;
    for (const auto& x : sol.primal)
        if (x < 0) return false;

    for (std::size_t i = 0; i < lp.num_rows(); ++i) {
        Rational lhs = dot(lp.rows[i], sol.primal);
        const Rational& y = sol.dual[i];
        switch (lp.relations[i]) {
            case Relation::LessEqual:
                if (lhs > lp.rhs[i]) return false;
                if (maximize ? y < 0 : y > 0) return false;
                break;
            case Relation::GreaterEqual:
                if (lhs < lp.rhs[i]) return false;
                if (maximize ? y > 0 : y < 0) return false;
                break;
            case Relation::Equal:
                if (lhs != lp.rhs[i]) return false;
                break;
        }
    }

    for (std::size_t j = 0; j < lp.num_vars(); ++j) {
        Rational reduced = 0;
        for (std::size_t i = 0; i < lp.num_rows(); ++i) reduced += lp.rows[i][j] * sol.dual[i];
        if (maximize ? reduced < lp.objective[j] : reduced > lp.objective[j]) return false;
    }

    Rational primal_value = dot(lp.objective, sol.primal);
    Rational dual_value = dot(lp.rhs, sol.dual);
    return primal_value == dual_value && primal_value == sol.value;
}

namespace detail {

/// Solves M y = b exactly; nullopt when M is singular.
inline std::optional<RationalVector> solve_square(std::vector<RationalVector> m, RationalVector b) {
    const std::size_t n = m.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(m[pivot], m[col]);
        std::swap(b[pivot], b[col]);
        Rational inv = 1 / m[col][col];
        for (std::size_t k = col; k < n; ++k) m[col][k] *= inv;
        b[col] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0) continue;
            Rational f = m[r][col];
            for (std::size_t k = col; k < n; ++k) m[r][k] -= f * m[col][k];
            b[r] -= f * b[col];
        }
    }
    return b;
}

/// Dense two-phase tableau simplex with Bland's rule.
class Simplex {
  public:
    explicit Simplex(const LPInstance& lp) : lp_(lp) { build(); }

    LPSolution solve() {
        LPSolution sol;
        sol.primal.assign(lp_.num_vars(), Rational(0));
        sol.dual.assign(lp_.num_rows(), Rational(0));

        // Phase 1: maximize -(sum of artificials).
        if (num_artificial_ > 0) {
            RationalVector cost(cols_, Rational(0));
            for (std::size_t j = first_artificial_; j < cols_; ++j) cost[j] = -1;
            set_costs(cost);
            iterate(false);
            if (objective_value() < 0) {
                sol.status = LPStatus::Infeasible;
                return sol;
            }
            evict_artificials();
        }

        // Phase 2 on the original objective (negated for minimization).
        RationalVector cost(cols_, Rational(0));
        for (std::size_t j = 0; j < lp_.num_vars(); ++j)
            cost[j] = lp_.sense == Sense::Maximize ? lp_.objective[j] : Rational(-lp_.objective[j]);
        set_costs(cost);
        if (!iterate(true)) {
            sol.status = LPStatus::Unbounded;
            return sol;
        }

        sol.status = LPStatus::Optimal;
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (alive_[i] && basis_[i] < lp_.num_vars()) sol.primal[basis_[i]] = tab_[i][cols_];
        sol.value = dot(lp_.objective, sol.primal);
        sol.dual = dual_from_basis(cost);
        return sol;
    }

  private:
    void build() {
        const std::size_t n = lp_.num_vars(), m = lp_.num_rows();
        sign_.assign(m, 1);
        std::vector<Relation> rel = lp_.relations;
        for (std::size_t i = 0; i < m; ++i) {
            if (lp_.rhs[i] < 0) {
                sign_[i] = -1;
                if (rel[i] == Relation::LessEqual) rel[i] = Relation::GreaterEqual;
                else if (rel[i] == Relation::GreaterEqual) rel[i] = Relation::LessEqual;
            }
        }
        std::size_t slack_count = 0;
        for (auto r : rel)
            if (r != Relation::Equal) ++slack_count;
        for (auto r : rel)
            if (r != Relation::LessEqual) ++num_artificial_;
        first_artificial_ = n + slack_count;
        cols_ = first_artificial_ + num_artificial_;

        tab_.assign(m, RationalVector(cols_ + 1, Rational(0)));
        basis_.assign(m, 0);
        alive_.assign(m, true);
        std::size_t slack = n, art = first_artificial_;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) tab_[i][j] = sign_[i] * lp_.rows[i][j];
            tab_[i][cols_] = sign_[i] * lp_.rhs[i];
            switch (rel[i]) {
                case Relation::LessEqual:
                    tab_[i][slack] = 1;
                    basis_[i] = slack++;
                    break;
                case Relation::GreaterEqual:
                    tab_[i][slack++] = -1;
                    tab_[i][art] = 1;
                    basis_[i] = art++;
                    break;
                case Relation::Equal:
                    tab_[i][art] = 1;
                    basis_[i] = art++;
                    break;
            }
        }
        original_ = tab_;
    }

    void set_costs(const RationalVector& cost) {
        cost_ = cost;
        reduced_.assign(cols_, Rational(0));
        for (std::size_t j = 0; j < cols_; ++j) {
            Rational z = 0;
            for (std::size_t i = 0; i < tab_.size(); ++i)
                if (alive_[i] && tab_[i][j] != 0) z += cost_[basis_[i]] * tab_[i][j];
            reduced_[j] = cost_[j] - z;
        }
    }

    Rational objective_value() const {
        Rational v = 0;
        for (std::size_t i = 0; i < tab_.size(); ++i)
            if (alive_[i]) v += cost_[basis_[i]] * tab_[i][cols_];
        return v;
    }

    void pivot(std::size_t row, std::size_t col) {
        Rational inv = 1 / tab_[row][col];
        for (auto& v : tab_[row])
            if (v != 0) v *= inv;
        for (std::size_t i = 0; i < tab_.size(); ++i) {
            if (i == row || !alive_[i] || tab_[i][col] == 0) continue;
            Rational f = tab_[i][col];
            for (std::size_t k = 0; k <= cols_; ++k)
                if (tab_[row][k] != 0) tab_[i][k] -= f * tab_[row][k];
        }
        if (!reduced_.empty() && reduced_[col] != 0) {
            Rational f = reduced_[col];
            for (std::size_t k = 0; k < cols_; ++k)
                if (tab_[row][k] != 0) reduced_[k] -= f * tab_[row][k];
        }
        basis_[row] = col;
    }

    /// Returns false when the objective is unbounded.
    bool iterate(bool forbid_artificial) {
        const std::size_t limit = forbid_artificial ? first_artificial_ : cols_;
        while (true) {
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < limit; ++j)
                if (reduced_[j] > 0) {
                    enter = j;
                    break;
                }
            if (enter == cols_) return true;

            std::size_t leave = tab_.size();
            Rational best;
            for (std::size_t i = 0; i < tab_.size(); ++i) {
                if (!alive_[i] || tab_[i][enter] <= 0) continue;
                Rational ratio = tab_[i][cols_] / tab_[i][enter];
                if (leave == tab_.size() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == tab_.size()) return false;
            pivot(leave, enter);
        }
    }

    void evict_artificials() {
        for (std::size_t i = 0; i < tab_.size(); ++i) {
            if (!alive_[i] || basis_[i] < first_artificial_) continue;
            std::size_t col = first_artificial_;
            for (std::size_t j = 0; j < first_artificial_; ++j)
                if (tab_[i][j] != 0) {
                    col = j;
                    break;
                }
            if (col == first_artificial_) {
                alive_[i] = false;  // redundant equality
            } else {
                pivot(i, col);
            }
        }
    }

    RationalVector dual_from_basis(const RationalVector& cost) const {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < tab_.size(); ++i)
            if (alive_[i]) rows.push_back(i);
        const std::size_t k = rows.size();
        std::vector<RationalVector> bt(k, RationalVector(k, Rational(0)));
        RationalVector cb(k);
        for (std::size_t a = 0; a < k; ++a) {
            std::size_t col = basis_[rows[a]];
            cb[a] = cost[col];
            for (std::size_t b = 0; b < k; ++b) bt[a][b] = original_[rows[b]][col];
        }
        auto y = solve_square(std::move(bt), std::move(cb));
        if (!y) throw std::logic_error("simplex basis became singular");
        RationalVector dual(tab_.size(), Rational(0));
        const bool minimize = lp_.sense == Sense::Minimize;
        for (std::size_t a = 0; a < k; ++a) {
            Rational v = sign_[rows[a]] * (*y)[a];
            dual[rows[a]] = minimize ? Rational(-v) : v;
        }
        return dual;
    }

    const LPInstance& lp_;
    std::vector<int> sign_;
    std::size_t num_artificial_ = 0;
    std::size_t first_artificial_ = 0;
    std::size_t cols_ = 0;
    std::vector<RationalVector> tab_;
    std::vector<RationalVector> original_;
    std::vector<std::size_t> basis_;
    std::vector<bool> alive_;
    RationalVector cost_;
    RationalVector reduced_;
};

}  // namespace detail

/// Exact primal simplex (Bland's rule, two phases). Every optimal answer is
/// checked with verify_certificate before it is returned.
inline LPSolution solve_lp(const LPInstance& lp) {
    lp.check_shape();
    ++LPAudit::solves;
    LPSolution sol = detail::Simplex(lp).solve();
    if (sol.optimal()) {
        ++LPAudit::optimal;
        if (!verify_certificate(lp, sol)) throw std::logic_error("simplex produced an invalid duality certificate");
        ++LPAudit::certified;
    }
    return sol;
}

/// min cost . x  s.t.  A x >= b,  x <= box,  x >= 0.
struct CoveringInstance {
    std::vector<std::vector<std::int64_t>> A;  // n rows x m columns, nonnegative
    RationalVector b;                          // length n, nonnegative
    RationalVector cost;                       // length m, positive
    std::vector<std::int64_t> box;             // length m, nonnegative

    void check() const {
        const std::size_t m = cost.size();
        if (A.size() != b.size() || box.size() != m) throw std::invalid_argument("covering instance shape mismatch");
        for (const auto& row : A) {
            if (row.size() != m) throw std::invalid_argument("covering row has wrong length");
            for (auto a : row)
                if (a < 0) throw std::invalid_argument("covering matrix must be nonnegative");
        }
        for (const auto& v : b)
            if (v < 0) throw std::invalid_argument("covering demand must be nonnegative");
        for (const auto& c : cost)
            if (c <= 0) throw std::invalid_argument("covering cost must be positive");
        for (auto u : box)
            if (u < 0) throw std::invalid_argument("covering box must be nonnegative");
    }
};

inline LPInstance covering_lp(const CoveringInstance& inst) {
    inst.check();
    LPInstance lp;
    lp.sense = Sense::Minimize;
    lp.objective = inst.cost;
    const std::size_t m = inst.cost.size();
    for (std::size_t i = 0; i < inst.A.size(); ++i) {
        RationalVector row(m);
        for (std::size_t j = 0; j < m; ++j) row[j] = inst.A[i][j];
        lp.add_row(std::move(row), Relation::GreaterEqual, inst.b[i]);
    }
    for (std::size_t j = 0; j < m; ++j) {
        RationalVector row(m, Rational(0));
        row[j] = 1;
        lp.add_row(std::move(row), Relation::LessEqual, Rational(inst.box[j]));
    }
    return lp;
}

/// Exact fractional covering with box constraints. `value` is the minimum cost;
/// dual entries are ordered as in covering_lp (cover rows, then box rows).
inline LPSolution solve_covering_box(const CoveringInstance& inst) { return solve_lp(covering_lp(inst)); }

}  // namespace capregion
