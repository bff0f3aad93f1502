#include "drr/exactlp.hpp"

#include <algorithm>
#include <stdexcept>

namespace drr::exactlp {

int LinearProgram::add_variable(std::optional<Rat> lower, std::optional<Rat> upper) {
    if (lower && upper && *lower > *upper)
        throw std::invalid_argument("variable with lower > upper");
    lower_.push_back(std::move(lower));
    upper_.push_back(std::move(upper));
    return num_variables() - 1;
}

void LinearProgram::check_var_ids(const std::map<int, Rat>& coeffs) const {
    for (const auto& [j, a] : coeffs)
        if (j < 0 || j >= num_variables())
            throw std::invalid_argument("constraint references undeclared variable " +
                                        std::to_string(j));
}

void LinearProgram::add_constraint(std::map<int, Rat> coeffs, Relation rel, const Rat& rhs) {
    check_var_ids(coeffs);
    Row r;
    r.coeffs = std::move(coeffs);
    r.relation = rel;
    switch (rel) {
        case Relation::le: r.hi = rhs; break;
        case Relation::ge: r.lo = rhs; break;
        case Relation::eq: r.lo = rhs; r.hi = rhs; break;
    }
    rows_.push_back(std::move(r));
}

void LinearProgram::add_range(std::map<int, Rat> coeffs, const Rat& lo, const Rat& hi) {
    if (lo > hi) throw std::invalid_argument("range constraint with lo > hi");
    check_var_ids(coeffs);
    Row r;
    r.coeffs = std::move(coeffs);
    r.relation = lo == hi ? Relation::eq : Relation::le;
    r.lo = lo;
    r.hi = hi;
    rows_.push_back(std::move(r));
}

void LinearProgram::set_objective(std::map<int, Rat> coeffs, Sense sense) {
    check_var_ids(coeffs);
    objective_ = std::move(coeffs);
    sense_ = sense;
}

bool check_feasible(const LinearProgram& lp, const std::map<int, Rat>& point) {
    for (const auto& [j, v] : point)
        if (j < 0 || j >= lp.num_variables())
            throw std::invalid_argument("point references unknown variable " + std::to_string(j));
    auto value_of = [&](int j) -> const Rat& {
        auto it = point.find(j);
        if (it == point.end())
            throw std::invalid_argument("point missing variable " + std::to_string(j));
        return it->second;
    };
    for (int j = 0; j < lp.num_variables(); ++j) {
        const Rat& v = value_of(j);
        if (lp.lower(j) && v < *lp.lower(j)) return false;
        if (lp.upper(j) && v > *lp.upper(j)) return false;
    }
    for (int i = 0; i < lp.num_constraints(); ++i) {
        const auto& row = lp.row(i);
        Rat act;
        for (const auto& [j, a] : row.coeffs) act += a * value_of(j);
        if (row.lo && act < *row.lo) return false;
        if (row.hi && act > *row.hi) return false;
    }
    return true;
}

namespace {

// Internal bounded simplex. Variable layout: structural 0..n-1, row activity
// n..n+m-1 (column -e_i), artificial n+m.. (column s_i * e_i).
class Simplex {
public:
    explicit Simplex(const LinearProgram& lp) : lp_(lp), n_(lp.num_variables()),
                                                m_(lp.num_constraints()) {
        lo_.resize(n_ + m_);
        hi_.resize(n_ + m_);
        for (int j = 0; j < n_; ++j) {
            lo_[j] = lp.lower(j);
            hi_[j] = lp.upper(j);
        }
        for (int i = 0; i < m_; ++i) {
            lo_[n_ + i] = lp.row(i).lo;
            hi_[n_ + i] = lp.row(i).hi;
        }
        cols_.resize(n_);
        for (int i = 0; i < m_; ++i)
            for (const auto& [j, a] : lp.row(i).coeffs)
                if (!a.is_zero()) cols_[j].push_back({i, a});
    }

    SolveStatus run(VertexSolution& out) {
        setup_phase1();
        simplex_loop(/*phase1=*/true);
        Rat infeas;
        for (int i = 0; i < m_; ++i)
            if (basic_[i] >= n_ + m_) infeas += xb_[i];
        if (infeas.sign() > 0) {
            out.certificate = make_certificate();
            out.pivots = pivots_;
            return SolveStatus::infeasible;
        }
        // Artificials are pinned to zero for phase 2.
        for (int j = n_ + m_; j < total_; ++j) {
            lo_[j] = Rat(0);
            hi_[j] = Rat(0);
        }
        setup_phase2_costs();
        bool unbounded = !simplex_loop(/*phase1=*/false);
        out.pivots = pivots_;
        if (unbounded) {
            out.ray = make_ray();
            return SolveStatus::unbounded;
        }
        out.values.resize(n_);
        for (int j = 0; j < n_; ++j) out.values[j] = value_of(j);
        Rat obj;
        for (const auto& [j, cj] : lp_.objective()) obj += cj * out.values[j];
        out.objective_value = obj;
        return SolveStatus::optimal;
    }

private:
    enum class State { basic, at_lower, at_upper, free_zero };

    const LinearProgram& lp_;
    int n_, m_, total_ = 0;
    std::vector<std::optional<Rat>> lo_, hi_;
    std::vector<std::vector<std::pair<int, Rat>>> cols_;  // structural columns
    std::vector<Rat> art_sign_;                           // per artificial
    std::vector<int> art_row_;
    std::vector<Rat> cost_;       // current phase costs
    std::vector<State> state_;
    std::vector<int> basic_;      // per row: variable index
    std::vector<Rat> xb_;         // per row: value of its basic variable
    std::vector<std::vector<Rat>> binv_;
    std::size_t pivots_ = 0;
    // Saved for the infeasibility certificate.
    std::vector<Rat> phase1_y_;

    Rat value_of(int j) const {
        switch (state_[j]) {
            case State::at_lower: return *lo_[j];
            case State::at_upper: return *hi_[j];
            case State::free_zero: return Rat(0);
            case State::basic:
                for (int i = 0; i < m_; ++i)
                    if (basic_[i] == j) return xb_[i];
                throw std::logic_error("basic variable without row");
        }
        throw std::logic_error("unreachable");
    }

    // Column of variable j in the row space.
    void append_column(int j, std::vector<std::pair<int, Rat>>& out) const {
        out.clear();
        if (j < n_) {
            out.assign(cols_[j].begin(), cols_[j].end());
        } else if (j < n_ + m_) {
            out.push_back({j - n_, Rat(-1)});
        } else {
            out.push_back({art_row_[j - n_ - m_], art_sign_[j - n_ - m_]});
        }
    }

    void setup_phase1() {
        state_.assign(n_ + m_, State::free_zero);
        for (int j = 0; j < n_; ++j) {
            if (lo_[j]) state_[j] = State::at_lower;
            else if (hi_[j]) state_[j] = State::at_upper;
            else state_[j] = State::free_zero;
        }
        std::vector<Rat> act(m_);
        for (int j = 0; j < n_; ++j) {
            Rat v = state_[j] == State::at_lower ? *lo_[j]
                    : state_[j] == State::at_upper ? *hi_[j] : Rat(0);
            if (v.is_zero()) continue;
            for (const auto& [i, a] : cols_[j]) act[i] += a * v;
        }
        basic_.assign(m_, -1);
        xb_.assign(m_, Rat(0));
        binv_.assign(m_, std::vector<Rat>(m_, Rat(0)));
        for (int i = 0; i < m_; ++i) {
            bool below = lo_[n_ + i] && act[i] < *lo_[n_ + i];
            bool above = hi_[n_ + i] && act[i] > *hi_[n_ + i];
            if (!below && !above) {
                basic_[i] = n_ + i;
                state_[n_ + i] = State::basic;
                xb_[i] = act[i];
                binv_[i][i] = Rat(-1);
            } else {
                // Activity variable pinned at the violated bound, artificial
                // absorbs the residual: a^T x - r + s q = 0.
                Rat bound = below ? *lo_[n_ + i] : *hi_[n_ + i];
                state_[n_ + i] = below ? State::at_lower : State::at_upper;
                Rat sign = below ? Rat(1) : Rat(-1);
                Rat q = (bound - act[i]) / sign;
                int aj = n_ + m_ + static_cast<int>(art_sign_.size());
                art_sign_.push_back(sign);
                art_row_.push_back(i);
                lo_.push_back(Rat(0));
                hi_.push_back(std::nullopt);
                state_.push_back(State::basic);
                basic_[i] = aj;
                xb_[i] = q;
                binv_[i][i] = sign;  // inverse of s on the diagonal equals s
            }
        }
        total_ = static_cast<int>(lo_.size());
        cost_.assign(total_, Rat(0));
        for (int j = n_ + m_; j < total_; ++j) cost_[j] = Rat(1);
    }

    void setup_phase2_costs() {
        cost_.assign(total_, Rat(0));
        const bool maximize = lp_.sense() == Sense::maximize;
        for (const auto& [j, cj] : lp_.objective()) cost_[j] = maximize ? -cj : cj;
    }

    std::vector<Rat> row_multipliers() const {
        // y = c_B^T B^{-1}
        std::vector<Rat> y(m_);
        for (int i = 0; i < m_; ++i) {
            if (cost_[basic_[i]].is_zero()) continue;
            const Rat& cb = cost_[basic_[i]];
            for (int k = 0; k < m_; ++k)
                if (!binv_[i][k].is_zero()) y[k] += cb * binv_[i][k];
        }
        return y;
    }

    Rat reduced_cost(int j, const std::vector<Rat>& y,
                     std::vector<std::pair<int, Rat>>& scratch) const {
        append_column(j, scratch);
        Rat d = cost_[j];
        for (const auto& [i, a] : scratch) d -= y[i] * a;
        return d;
    }

    // Returns false when unbounded (phase 2 only).
    bool simplex_loop(bool phase1) {
        std::vector<std::pair<int, Rat>> scratch;
        for (;;) {
            std::vector<Rat> y = row_multipliers();
            int enter = -1;
            int dir = 0;  // +1 increase, -1 decrease
            for (int j = 0; j < total_; ++j) {
                if (state_[j] == State::basic) continue;
                if (lo_[j] && hi_[j] && *lo_[j] == *hi_[j]) continue;  // fixed
                Rat d = reduced_cost(j, y, scratch);
                int s = d.sign();
                if (s == 0) continue;
                if (state_[j] == State::at_lower && s < 0) { enter = j; dir = 1; break; }
                if (state_[j] == State::at_upper && s > 0) { enter = j; dir = -1; break; }
                if (state_[j] == State::free_zero) { enter = j; dir = s < 0 ? 1 : -1; break; }
            }
            if (enter < 0) return true;  // optimal for this phase

            // u = B^{-1} A_enter
            append_column(enter, scratch);
            std::vector<Rat> u(m_);
            for (const auto& [i, a] : scratch)
                for (int r = 0; r < m_; ++r)
                    if (!binv_[r][i].is_zero()) u[r] += binv_[r][i] * a;

            // Ratio test: how far can `enter` move in direction `dir`.
            bool blocked = false;
            Rat best_theta;
            int leave_row = -1;
            if (lo_[enter] && hi_[enter]) {
                best_theta = *hi_[enter] - *lo_[enter];
                blocked = true;  // bound flip candidate
            }
            for (int i = 0; i < m_; ++i) {
                if (u[i].is_zero()) continue;
                // Basic value moves by -dir * u[i] * theta.
                int move = -dir * u[i].sign();
                const std::optional<Rat>& lim = move > 0 ? hi_[basic_[i]] : lo_[basic_[i]];
                if (!lim) continue;
                Rat gap = move > 0 ? *lim - xb_[i] : xb_[i] - *lim;
                Rat theta = gap / abs(u[i]);
                if (!blocked || theta < best_theta ||
                    (theta == best_theta && leave_row >= 0 &&
                     basic_[i] < basic_[leave_row])) {
                    blocked = true;
                    best_theta = theta;
                    leave_row = i;
                }
            }
            if (!blocked) {
                if (phase1) throw std::logic_error("phase 1 cannot be unbounded");
                unbounded_enter_ = enter;
                unbounded_dir_ = dir;
                unbounded_u_ = u;
                return false;
            }
            const Rat step = best_theta * Rat(dir);
            if (leave_row < 0) {
                // Bound flip: variable jumps to its opposite bound.
                for (int i = 0; i < m_; ++i)
                    if (!u[i].is_zero()) xb_[i] -= u[i] * step;
                state_[enter] = dir > 0 ? State::at_upper : State::at_lower;
                continue;
            }
            ++pivots_;
            // Basis change.
            Rat enter_value = state_[enter] == State::at_lower ? *lo_[enter]
                              : state_[enter] == State::at_upper ? *hi_[enter] : Rat(0);
            enter_value += step;
            int leave = basic_[leave_row];
            int leave_move = -dir * u[leave_row].sign();
            for (int i = 0; i < m_; ++i)
                if (i != leave_row && !u[i].is_zero()) xb_[i] -= u[i] * step;
            xb_[leave_row] = enter_value;
            basic_[leave_row] = enter;
            state_[enter] = State::basic;
            state_[leave] = leave_move > 0 ? State::at_upper : State::at_lower;

            // binv <- E * binv with pivot element u[leave_row].
            const Rat piv = u[leave_row];
            for (int k = 0; k < m_; ++k) binv_[leave_row][k] /= piv;
            for (int i = 0; i < m_; ++i) {
                if (i == leave_row || u[i].is_zero()) continue;
                const Rat f = u[i];
                for (int k = 0; k < m_; ++k)
                    if (!binv_[leave_row][k].is_zero()) binv_[i][k] -= f * binv_[leave_row][k];
            }
        }
    }

    InfeasibilityCertificate make_certificate() {
        InfeasibilityCertificate cert;
        cert.row_multipliers = row_multipliers();
        return cert;
    }

    UnboundedRay make_ray() const {
        UnboundedRay ray;
        ray.direction.assign(n_, Rat(0));
        if (unbounded_enter_ < n_) ray.direction[unbounded_enter_] = Rat(unbounded_dir_);
        for (int i = 0; i < m_; ++i) {
            if (basic_[i] < n_ && !unbounded_u_[i].is_zero())
                ray.direction[basic_[i]] = -Rat(unbounded_dir_) * unbounded_u_[i];
        }
        return ray;
    }

    int unbounded_enter_ = -1;
    int unbounded_dir_ = 0;
    std::vector<Rat> unbounded_u_;
};

}  // namespace

bool InfeasibilityCertificate::validate(const LinearProgram& lp) const {
    if (static_cast<int>(row_multipliers.size()) != lp.num_constraints()) return false;
    // w_j per structural variable, plus -y_i per activity variable. The box
    // maximum of sum w_j v_j must be negative while rows force it to zero.
    std::vector<Rat> w(lp.num_variables());
    for (int i = 0; i < lp.num_constraints(); ++i) {
        if (row_multipliers[i].is_zero()) continue;
        for (const auto& [j, a] : lp.row(i).coeffs) w[j] += row_multipliers[i] * a;
    }
    Rat box_max;
    for (int j = 0; j < lp.num_variables(); ++j) {
        int s = w[j].sign();
        if (s == 0) continue;
        const std::optional<Rat>& b = s > 0 ? lp.upper(j) : lp.lower(j);
        if (!b) return false;  // unbounded in the maximizing direction
        box_max += w[j] * *b;
    }
    for (int i = 0; i < lp.num_constraints(); ++i) {
        int s = (-row_multipliers[i]).sign();
        if (s == 0) continue;
        const std::optional<Rat>& b = s > 0 ? lp.row(i).hi : lp.row(i).lo;
        if (!b) return false;
        box_max += -row_multipliers[i] * *b;
    }
    return box_max.sign() < 0;
}

bool UnboundedRay::validate(const LinearProgram& lp) const {
    if (static_cast<int>(direction.size()) != lp.num_variables()) return false;
    bool nonzero = false;
    for (int j = 0; j < lp.num_variables(); ++j) {
        int s = direction[j].sign();
        if (s == 0) continue;
        nonzero = true;
        if (s > 0 && lp.upper(j)) return false;
        if (s < 0 && lp.lower(j)) return false;
    }
    if (!nonzero) return false;
    for (int i = 0; i < lp.num_constraints(); ++i) {
        Rat delta;
        for (const auto& [j, a] : lp.row(i).coeffs) delta += a * direction[j];
        int s = delta.sign();
        if (s > 0 && lp.row(i).hi) return false;
        if (s < 0 && lp.row(i).lo) return false;
    }
    Rat dobj;
    for (const auto& [j, cj] : lp.objective()) dobj += cj * direction[j];
    return lp.sense() == Sense::minimize ? dobj.sign() < 0 : dobj.sign() > 0;
}

VertexSolution solve_vertex(const LinearProgram& lp, const SolverLimits& limits) {
    const std::size_t dim = static_cast<std::size_t>(lp.num_variables()) *
                            static_cast<std::size_t>(std::max(lp.num_constraints(), 1));
    if (dim > limits.max_dimension) throw std::length_error("instance too large");
    VertexSolution out;
    out.objective_value = Rat(0);
    Simplex solver(lp);
    out.status = solver.run(out);
    return out;
}

}  // namespace drr::exactlp
