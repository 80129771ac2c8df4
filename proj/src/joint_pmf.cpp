#include "featcomp/joint_pmf.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace featcomp {

VarSelector::VarSelector(std::initializer_list<std::size_t> indices)
    : VarSelector(std::vector<std::size_t>(indices)) {}

VarSelector::VarSelector(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    std::unordered_set<std::size_t> seen;
    for (auto i : indices_) {
        if (!seen.insert(i).second) {
            throw PmfError("selector index " + std::to_string(i) + " repeated");
        }
    }
}

VarSelector VarSelector::range(std::size_t first, std::size_t last_exclusive) {
    std::vector<std::size_t> idx;
    for (auto i = first; i < last_exclusive; ++i) idx.push_back(i);
    return VarSelector(std::move(idx));
}

bool VarSelector::overlaps(const VarSelector& other) const {
    for (auto i : indices_) {
        if (std::find(other.indices_.begin(), other.indices_.end(), i) != other.indices_.end()) {
            return true;
        }
    }
    return false;
}

VarSelector VarSelector::join(const VarSelector& other) const {
    if (overlaps(other)) throw PmfError("selectors overlap");
    auto idx = indices_;
    idx.insert(idx.end(), other.indices_.begin(), other.indices_.end());
    return VarSelector(std::move(idx));
}

JointPMF::JointPMF(std::vector<Variable> variables, std::vector<double> table, std::size_t cell_cap)
    : variables_(std::move(variables)), table_(std::move(table)) {
    if (variables_.empty()) throw PmfError("pmf needs at least one variable");
    std::size_t cells = 1;
    for (const auto& v : variables_) {
        if (v.size == 0) throw PmfError("variable '" + v.name + "' has empty alphabet");
        if (cells > cell_cap / v.size) throw PmfError("pmf exceeds cell cap");
        cells *= v.size;
    }
    if (cells > cell_cap) throw PmfError("pmf exceeds cell cap");
    if (table_.size() != cells) {
        throw PmfError("table has " + std::to_string(table_.size()) + " cells, expected " +
                       std::to_string(cells));
    }
    double sum = 0.0;
    for (double v : table_) {
        if (!std::isfinite(v) || v < 0.0) throw PmfError("pmf entries must be finite and >= 0");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        std::ostringstream msg;
        msg << "pmf sums to " << std::setprecision(17) << sum;
        throw PmfError(msg.str());
    }
    strides_.assign(variables_.size(), 1);
    for (std::size_t i = variables_.size() - 1; i > 0; --i) {
        strides_[i - 1] = strides_[i] * variables_[i].size;
    }
}

JointPMF JointPMF::product(const std::vector<Variable>& variables,
                           const std::vector<std::vector<double>>& marginals) {
    if (variables.size() != marginals.size()) throw PmfError("one marginal per variable required");
    std::vector<double> table{1.0};
    for (std::size_t v = 0; v < variables.size(); ++v) {
        if (marginals[v].size() != variables[v].size) throw PmfError("marginal size mismatch");
        std::vector<double> next;
        next.reserve(table.size() * marginals[v].size());
        for (double a : table) {
            for (double b : marginals[v]) next.push_back(a * b);
        }
        table = std::move(next);
    }
    return JointPMF(variables, std::move(table));
}

std::size_t JointPMF::flat_index(std::span<const std::size_t> tuple) const {
    if (tuple.size() != variables_.size()) throw PmfError("tuple arity mismatch");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (tuple[i] >= variables_[i].size) throw PmfError("tuple index out of range");
        flat += tuple[i] * strides_[i];
    }
    return flat;
}

double JointPMF::at(std::span<const std::size_t> tuple) const { return table_[flat_index(tuple)]; }

std::vector<std::size_t> JointPMF::tuple_of(std::size_t flat) const {
    std::vector<std::size_t> tuple(variables_.size());
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        tuple[i] = flat / strides_[i];
        flat %= strides_[i];
    }
    return tuple;
}

void JointPMF::validate_selector(const VarSelector& sel) const {
    for (auto i : sel.indices()) {
        if (i >= variables_.size()) {
            throw PmfError("selector index " + std::to_string(i) + " out of range");
        }
    }
}

JointPMF marginalize(const JointPMF& p, const VarSelector& keep) {
    if (keep.empty()) throw PmfError("marginalize needs a non-empty selector");
    p.validate_selector(keep);

    const auto& vars = p.variables();
    std::vector<Variable> out_vars;
    for (auto i : keep.indices()) out_vars.push_back(vars[i]);

    // Stride of each kept variable inside the output table.
    std::vector<std::size_t> out_stride(keep.size(), 1);
    for (std::size_t j = keep.size() - 1; j > 0; --j) {
        out_stride[j - 1] = out_stride[j] * out_vars[j].size;
    }
    std::vector<std::size_t> contrib(vars.size(), 0);
    for (std::size_t j = 0; j < keep.size(); ++j) contrib[keep.indices()[j]] = out_stride[j];

    std::vector<double> out(out_stride[0] * out_vars[0].size, 0.0);
    std::vector<std::size_t> tuple(vars.size(), 0);
    std::size_t out_index = 0;
    for (double v : p.table()) {
        out[out_index] += v;
        // odometer increment, last variable fastest
        for (std::size_t d = vars.size(); d-- > 0;) {
            out_index += contrib[d];
            if (++tuple[d] < vars[d].size) break;
            out_index -= contrib[d] * vars[d].size;
            tuple[d] = 0;
        }
    }
    return JointPMF(std::move(out_vars), std::move(out));
}

void write_pmf(std::ostream& out, const JointPMF& p) {
    out << "vars: ";
    for (std::size_t i = 0; i < p.arity(); ++i) {
        if (i) out << ',';
        out << p.variables()[i].name << ':' << p.variables()[i].size;
    }
    out << '\n';
    const auto table = p.table();
    for (std::size_t flat = 0; flat < table.size(); ++flat) {
        if (table[flat] == 0.0) continue;
        auto tuple = p.tuple_of(flat);
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            if (i) out << ',';
            out << tuple[i];
        }
        out << '\t' << std::setprecision(17) << table[flat] << '\n';
    }
}

namespace {

std::size_t parse_size(std::string_view s, const char* what) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw PmfError(std::string("bad ") + what + " '" + std::string(s) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

}  // namespace

JointPMF read_pmf(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("vars:", 0) != 0) {
        throw PmfError("pmf text must start with 'vars:' header");
    }
    std::string_view header(line);
    header.remove_prefix(5);
    while (!header.empty() && header.front() == ' ') header.remove_prefix(1);

    std::vector<Variable> vars;
    std::size_t cells = 1;
    for (auto part : split(header, ',')) {
        auto colon = part.rfind(':');
        if (colon == std::string_view::npos) throw PmfError("variable entry needs name:size");
        Variable v{std::string(part.substr(0, colon)), parse_size(part.substr(colon + 1), "size")};
        if (v.size == 0 || cells > JointPMF::kDefaultCellCap / v.size) {
            throw PmfError("bad alphabet size for '" + v.name + "'");
        }
        cells *= v.size;
        vars.push_back(std::move(v));
    }

    std::vector<double> table(cells, 0.0);
    std::vector<std::size_t> strides(vars.size(), 1);
    for (std::size_t i = vars.size() - 1; i > 0; --i) strides[i - 1] = strides[i] * vars[i].size;

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw PmfError("cell line needs a tab separator");
        auto idx = split(std::string_view(line).substr(0, tab), ',');
        if (idx.size() != vars.size()) throw PmfError("cell tuple arity mismatch");
        std::size_t flat = 0;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            auto k = parse_size(idx[i], "index");
            if (k >= vars[i].size) throw PmfError("cell index out of range");
            flat += k * strides[i];
        }
        std::size_t used = 0;
        double prob = 0.0;
        try {
            prob = std::stod(line.substr(tab + 1), &used);
        } catch (const std::exception&) {
            throw PmfError("bad probability on line '" + line + "'");
        }
        table[flat] = prob;
    }
    return JointPMF(std::move(vars), std::move(table));
}

}  // namespace featcomp
