#pragma once

#include "drr/rational.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace drr::exactlp {

enum class Sense { minimize, maximize };
enum class Relation { le, eq, ge };

// Linear program over dense variable ids 0..n-1. Bounds may be infinite
// (nullopt). Constraints are stored as activity intervals lo <= a^T x <= hi;
// the three classic relations map onto half-open intervals, and a two-sided
// range occupies a single row.
class LinearProgram {
public:
    struct Row {
        std::map<int, Rat> coeffs;
        std::optional<Rat> lo, hi;
        Relation relation;  // as declared; range rows are declared as `le` pairs fused
    };

    int add_variable(std::optional<Rat> lower, std::optional<Rat> upper);
    void add_constraint(std::map<int, Rat> coeffs, Relation rel, const Rat& rhs);
    // lo <= a^T x <= hi in one row.
    void add_range(std::map<int, Rat> coeffs, const Rat& lo, const Rat& hi);
    void set_objective(std::map<int, Rat> coeffs, Sense sense);

    int num_variables() const { return static_cast<int>(lower_.size()); }
    int num_constraints() const { return static_cast<int>(rows_.size()); }
    const Row& row(int i) const { return rows_[i]; }
    const std::optional<Rat>& lower(int j) const { return lower_[j]; }
    const std::optional<Rat>& upper(int j) const { return upper_[j]; }
    const std::map<int, Rat>& objective() const { return objective_; }
    Sense sense() const { return sense_; }

private:
    void check_var_ids(const std::map<int, Rat>& coeffs) const;

    std::vector<std::optional<Rat>> lower_, upper_;
    std::vector<Row> rows_;
    std::map<int, Rat> objective_;
    Sense sense_ = Sense::minimize;
};

enum class SolveStatus { optimal, infeasible, unbounded };

// Row multipliers y proving that no point in the variable box satisfies all
// constraint rows: the box maximum of sum_j (y^T A)_j v_j is negative while
// feasibility would force the sum to lie in the rows' activity intervals.
struct InfeasibilityCertificate {
    std::vector<Rat> row_multipliers;
    bool validate(const LinearProgram& lp) const;
};

// Improving feasible direction: A d respects row intervals' free sides,
// bounds never block, and the objective strictly improves along it.
struct UnboundedRay {
    std::vector<Rat> direction;  // per structural variable
    bool validate(const LinearProgram& lp) const;
};

struct VertexSolution {
    SolveStatus status;
    std::vector<Rat> values;  // per variable, when optimal
    Rat objective_value;      // when optimal
    std::optional<InfeasibilityCertificate> certificate;
    std::optional<UnboundedRay> ray;
    std::size_t pivots = 0;
};

struct SolverLimits {
    // Cap on variables x constraints, guarding accidental huge models.
    std::size_t max_dimension = 8u * 1000u * 1000u;
};

// Bounded-variable primal simplex, Phase I via artificial variables,
// Bland's rule throughout (entering: smallest eligible id; leaving: smallest
// basic id among ratio ties). Returns a basic optimal point.
VertexSolution solve_vertex(const LinearProgram& lp, const SolverLimits& limits = {});

// Exact satisfaction check of every row and bound. Throws on unknown or
// missing variable ids.
bool check_feasible(const LinearProgram& lp, const std::map<int, Rat>& point);

}  // namespace drr::exactlp
