#pragma once
// Dense joint probability tables over small finite-alphabet variables.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace featcomp {

/// Raised when a table, selector, or serialized pmf violates its contract.
class PmfError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Variable {
    std::string name;
    std::size_t size = 0;

    bool operator==(const Variable&) const = default;
};

/// Ordered subset of variable positions within a JointPMF.
class VarSelector {
public:
    VarSelector() = default;
    VarSelector(std::initializer_list<std::size_t> indices);
    explicit VarSelector(std::vector<std::size_t> indices);

    static VarSelector range(std::size_t first, std::size_t last_exclusive);

    const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    std::size_t size() const noexcept { return indices_.size(); }
    bool empty() const noexcept { return indices_.empty(); }

    bool overlaps(const VarSelector& other) const;
    /// Concatenation; throws PmfError if the two share an index.
    VarSelector join(const VarSelector& other) const;

    bool operator==(const VarSelector&) const = default;

private:
    std::vector<std::size_t> indices_;
};

/// Exact probability table, row-major over the variable tuple (last variable fastest).
///
/// Construction validates non-negativity and normalization (|sum - 1| <= 1e-12)
/// and rejects tables above the cell cap.
class JointPMF {
public:
    static constexpr std::size_t kDefaultCellCap = 10'000'000;
    static constexpr double kSumTolerance = 1e-12;

    JointPMF(std::vector<Variable> variables, std::vector<double> table,
             std::size_t cell_cap = kDefaultCellCap);

    /// Product measure of independent marginals.
    static JointPMF product(const std::vector<Variable>& variables,
                            const std::vector<std::vector<double>>& marginals);

    const std::vector<Variable>& variables() const noexcept { return variables_; }
    std::span<const double> table() const noexcept { return table_; }
    std::size_t arity() const noexcept { return variables_.size(); }
    std::size_t cell_count() const noexcept { return table_.size(); }

    double at(std::span<const std::size_t> tuple) const;
    std::size_t flat_index(std::span<const std::size_t> tuple) const;
    /// Inverse of flat_index.
    std::vector<std::size_t> tuple_of(std::size_t flat) const;

    void validate_selector(const VarSelector& sel) const;

    bool operator==(const JointPMF&) const = default;

private:
    std::vector<Variable> variables_;
    std::vector<double> table_;
    std::vector<std::size_t> strides_;
};

/// Sum over every variable not in `keep`; result variables follow the order of `keep`.
JointPMF marginalize(const JointPMF& p, const VarSelector& keep);

/// Text form: `vars: name:size,...` header, then `i,j,k<TAB>prob` for each nonzero cell.
void write_pmf(std::ostream& out, const JointPMF& p);
JointPMF read_pmf(std::istream& in);

}  // namespace featcomp
