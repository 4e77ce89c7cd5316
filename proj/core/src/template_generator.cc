#include "grsrp/template_generator.h"

#include "grsrp/errors.h"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace grsrp {

namespace {

constexpr std::uint64_t P = ModP::kPrime;

// Dense matrix over Z_p with rows stored contiguously.
struct ModMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint64_t> data;

    ModMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0) {}
    std::uint64_t *row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
};

std::uint64_t inv_mod(std::uint64_t v) { return ModP(static_cast<std::int64_t>(v)).inverse().value(); }

// Row echelon form in place; returns pivot columns in order.
std::vector<int> echelon(ModMatrix &m) {
    std::vector<int> pivots;
    int cur = 0;
    for (int c = 0; c < m.cols && cur < m.rows; ++c) {
        int sel = -1;
        for (int r = cur; r < m.rows; ++r) {
            if (m.row(r)[c] != 0) {
                sel = r;
                break;
            }
        }
        if (sel < 0) {
            continue;
        }
        if (sel != cur) {
            std::swap_ranges(m.row(sel) + c, m.row(sel) + m.cols, m.row(cur) + c);
        }
        std::uint64_t *prow = m.row(cur);
        const std::uint64_t inv = inv_mod(prow[c]);
        for (int k = c; k < m.cols; ++k) {
            prow[k] = prow[k] * inv % P;
        }
        for (int r = cur + 1; r < m.rows; ++r) {
            std::uint64_t *rr = m.row(r);
            const std::uint64_t f = rr[c];
            if (f == 0) {
                continue;
            }
            for (int k = c; k < m.cols; ++k) {
                if (prow[k] != 0) {
                    rr[k] = (rr[k] + (P - prow[k]) * f) % P;
                }
            }
        }
        pivots.push_back(c);
        ++cur;
    }
    return pivots;
}

using ColumnIndex = std::map<Monomial, int>;

ModMatrix expand(const PolynomialSystem<ModP> &sys, const std::vector<TemplateRow> &rows, const ColumnIndex &cols) {
    ModMatrix m(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (int r = 0; r < m.rows; ++r) {
        const auto &eq = sys.equations[rows[r].equation];
        for (const auto &[mono, c] : eq.terms()) {
            const auto it = cols.find(multiply(mono, rows[r].multiplier));
            if (it != cols.end()) {
                m.row(r)[it->second] = c.value();
            }
        }
    }
    return m;
}

std::vector<TemplateRow> all_multiples(const PolynomialSystem<ModP> &sys, int expansion_degree) {
    std::vector<TemplateRow> rows;
    std::vector<Monomial> monos = monomials_up_to(expansion_degree);
    // Lower-degree multipliers first so row selection favours them.
    std::reverse(monos.begin(), monos.end());
    for (const auto &mult : monos) {
        for (int e = 0; e <= kMinimalSampleSize; ++e) {
            if (degree(mult) + sys.equations[e].total_degree() <= expansion_degree) {
                rows.push_back({e, mult});
            }
        }
    }
    return rows;
}

ColumnIndex index_columns(const std::vector<Monomial> &order) {
    ColumnIndex idx;
    for (int c = 0; c < static_cast<int>(order.size()); ++c) {
        idx.emplace(order[c], c);
    }
    return idx;
}

std::set<Monomial> support(const PolynomialSystem<ModP> &sys, const std::vector<TemplateRow> &rows) {
    std::set<Monomial> s;
    for (const auto &row : rows) {
        for (const auto &[mono, c] : sys.equations[row.equation].terms()) {
            s.insert(multiply(mono, row.multiplier));
        }
    }
    return s;
}

struct ColumnSplit {
    std::vector<Monomial> excessive;
    std::vector<Monomial> reducible;
    std::vector<Monomial> basis;

    std::vector<Monomial> ordered() const {
        std::vector<Monomial> out = excessive;
        out.insert(out.end(), reducible.begin(), reducible.end());
        out.insert(out.end(), basis.begin(), basis.end());
        return out;
    }
};

ColumnSplit split_columns(const std::set<Monomial> &supp, const std::vector<Monomial> &basis,
                          const std::vector<Monomial> &reducible) {
    ColumnSplit split;
    split.basis = basis;
    split.reducible = reducible;
    for (const auto &m : supp) {
        if (std::find(basis.begin(), basis.end(), m) == basis.end() &&
            std::find(reducible.begin(), reducible.end(), m) == reducible.end()) {
            split.excessive.push_back(m);
        }
    }
    std::sort(split.excessive.begin(), split.excessive.end(), GrevlexGreater{});
    return split;
}

// Number of pivots falling in the reducible block when the columns are
// ordered excessive, reducible, basis. The action matrix is available iff this
// equals the number of reducible monomials.
int reducible_pivots(const PolynomialSystem<ModP> &sys, const std::vector<TemplateRow> &rows, const ColumnSplit &split,
                     std::vector<int> *excessive_pivots = nullptr) {
    const std::vector<Monomial> order = split.ordered();
    ModMatrix m = expand(sys, rows, index_columns(order));
    const auto pivots = echelon(m);
    const int ne = static_cast<int>(split.excessive.size());
    const int nr = static_cast<int>(split.reducible.size());
    int count = 0;
    for (int c : pivots) {
        if (c >= ne && c < ne + nr) {
            ++count;
        }
        if (excessive_pivots != nullptr && c < ne) {
            excessive_pivots->push_back(c);
        }
    }
    return count;
}

bool reducible_in_support(const std::set<Monomial> &supp, const std::vector<Monomial> &reducible) {
    return std::all_of(reducible.begin(), reducible.end(), [&](const Monomial &m) { return supp.count(m) > 0; });
}

// Keeps a maximal set of rows independent on the excessive and reducible
// columns, scanning rows in the given order.
std::vector<TemplateRow> select_independent_rows(const PolynomialSystem<ModP> &sys,
                                                 const std::vector<TemplateRow> &rows, const ColumnSplit &split) {
    const std::vector<Monomial> order = split.ordered();
    const int width = static_cast<int>(split.excessive.size() + split.reducible.size());
    ModMatrix m = expand(sys, rows, index_columns(order));
    std::vector<std::vector<std::uint64_t>> basis_rows(width);
    std::vector<TemplateRow> kept;
    std::vector<std::uint64_t> v(width);
    for (int r = 0; r < m.rows; ++r) {
        std::copy(m.row(r), m.row(r) + width, v.begin());
        for (int c = 0; c < width; ++c) {
            if (v[c] == 0) {
                continue;
            }
            if (basis_rows[c].empty()) {
                const std::uint64_t inv = inv_mod(v[c]);
                for (int k = c; k < width; ++k) {
                    v[k] = v[k] * inv % P;
                }
                basis_rows[c] = v;
                kept.push_back(rows[r]);
                break;
            }
            const std::uint64_t f = v[c];
            const auto &b = basis_rows[c];
            for (int k = c; k < width; ++k) {
                if (b[k] != 0) {
                    v[k] = (v[k] + (P - b[k]) * f) % P;
                }
            }
        }
    }
    return kept;
}

// Drops rows that are the only ones touching some excessive column; each such
// removal lowers both ranks by one and leaves the reducibility intact.
void drop_singleton_rows(const PolynomialSystem<ModP> &sys, std::vector<TemplateRow> &rows,
                         const std::vector<Monomial> &basis, const std::vector<Monomial> &reducible) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<Monomial, std::vector<int>> users;
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            for (const auto &[mono, c] : sys.equations[rows[r].equation].terms()) {
                users[multiply(mono, rows[r].multiplier)].push_back(r);
            }
        }
        std::set<int> drop;
        for (const auto &[mono, rs] : users) {
            const bool special = std::find(basis.begin(), basis.end(), mono) != basis.end() ||
                                 std::find(reducible.begin(), reducible.end(), mono) != reducible.end();
            if (!special && rs.size() == 1) {
                drop.insert(rs.front());
            }
        }
        if (!drop.empty()) {
            std::vector<TemplateRow> next;
            for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
                if (!drop.count(r)) {
                    next.push_back(rows[r]);
                }
            }
            rows.swap(next);
            changed = true;
        }
    }
}

std::vector<Monomial> action_targets(const std::vector<Monomial> &basis, int action_variable) {
    std::vector<Monomial> reducible;
    const Monomial x = unit_monomial(action_variable);
    for (const auto &b : basis) {
        const Monomial xb = multiply(x, b);
        if (std::find(basis.begin(), basis.end(), xb) == basis.end()) {
            reducible.push_back(xb);
        }
    }
    std::sort(reducible.begin(), reducible.end(), GrevlexGreater{});
    reducible.erase(std::unique(reducible.begin(), reducible.end()), reducible.end());
    return reducible;
}

} // namespace

PolynomialSystem<ModP> random_probe_system(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> any(1, static_cast<std::int64_t>(P) - 1);
    std::uniform_int_distribution<std::int64_t> small(-50, 50);

    const Vec3T<ModP> v{ModP(small(rng)), ModP(small(rng)), ModP(small(rng))};
    const ModP vv = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    const ModP kinv = (ModP(1) + vv).inverse();
    const Mat3T<ModP> sk = detail::skew3(v);
    Mat3T<ModP> r0{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const ModP diag = i == j ? ModP(1) - vv : ModP(0);
            r0[i][j] = (diag + ModP(2) * sk[i][j] + ModP(2) * v[i] * v[j]) * kinv;
        }
    }

    std::array<EpipolarCoefficients<ModP>, kMinimalSampleSize> eqs;
    for (auto &eq : eqs) {
        const Vec3T<ModP> ray_i{ModP(any(rng)), ModP(any(rng)), ModP(1)};
        const Vec3T<ModP> ray_j{ModP(any(rng)), ModP(any(rng)), ModP(1)};
        const Vec3T<ModP> w_i{ModP(any(rng)), ModP(any(rng)), ModP(any(rng))};
        const Vec3T<ModP> w_j{ModP(any(rng)), ModP(any(rng)), ModP(any(rng))};
        eq = epipolar_coefficients<ModP>(ray_i, ModP(any(rng)), w_i, ray_j, ModP(any(rng)), w_j, r0);
    }
    return build_system_from_coefficients<ModP>(eqs);
}

std::vector<Monomial> standard_monomials(const PolynomialSystem<ModP> &system, int expansion_degree) {
    const std::vector<TemplateRow> rows = all_multiples(system, expansion_degree);
    const std::vector<Monomial> cols = monomials_up_to(expansion_degree); // grevlex descending
    ModMatrix m = expand(system, rows, index_columns(cols));
    std::vector<Monomial> leading;
    for (int c : echelon(m)) {
        leading.push_back(cols[c]);
    }

    for (int v = 0; v < kNumUnknowns; ++v) {
        const bool has_pure_power = std::any_of(leading.begin(), leading.end(), [&](const Monomial &l) {
            return l[v] > 0 && degree(l) == l[v];
        });
        if (!has_pure_power) {
            return {};
        }
    }

    const auto is_standard = [&](const Monomial &mono) {
        return std::none_of(leading.begin(), leading.end(), [&](const Monomial &l) { return divides(l, mono); });
    };
    std::set<Monomial> seen{Monomial{}};
    std::deque<Monomial> queue{Monomial{}};
    std::vector<Monomial> out;
    if (!is_standard(Monomial{})) {
        return {};
    }
    while (!queue.empty()) {
        const Monomial cur = queue.front();
        queue.pop_front();
        out.push_back(cur);
        for (int v = 0; v < kNumUnknowns; ++v) {
            const Monomial next = multiply(cur, unit_monomial(v));
            if (!seen.insert(next).second) {
                continue;
            }
            if (is_standard(next)) {
                queue.push_back(next);
            }
        }
    }
    std::sort(out.begin(), out.end(), GrevlexGreater{});
    return out;
}

EliminationTemplate generate_template(const GeneratorOptions &options, GeneratorReport *report) {
    GeneratorReport local;
    GeneratorReport &rep = report ? *report : local;
    const PolynomialSystem<ModP> sys = random_probe_system(options.seed);
    std::ostringstream diag;

    // The quotient basis is certified by the smallest expansion whose leading
    // monomials make the ideal visibly zero-dimensional.
    std::vector<Monomial> basis;
    for (int deg = options.min_degree; deg <= options.max_degree && basis.empty(); ++deg) {
        basis = standard_monomials(sys, deg);
        rep.log.push_back("basis at degree " + std::to_string(deg) + ": " +
                          (basis.empty() ? std::string("ideal not yet zero-dimensional")
                                         : std::to_string(basis.size()) + " standard monomials"));
        diag << rep.log.back() << "; ";
    }
    rep.quotient_dimension = static_cast<int>(basis.size());
    if (static_cast<int>(basis.size()) != options.expected_solutions) {
        throw TemplateError("template generation failed: expected quotient dimension " +
                            std::to_string(options.expected_solutions) + " (" + diag.str() + ")");
    }

    // The template itself may need a smaller expansion than the certificate.
    for (int deg = options.min_degree; deg <= options.max_degree; ++deg) {
        const std::vector<Monomial> reducible = action_targets(basis, options.action_variable);
        std::vector<TemplateRow> rows = all_multiples(sys, deg);
        std::set<Monomial> supp = support(sys, rows);
        if (!reducible_in_support(supp, reducible)) {
            rep.log.push_back("template degree " + std::to_string(deg) + ": reducible monomials out of reach");
            continue;
        }
        ColumnSplit split = split_columns(supp, basis, reducible);
        if (reducible_pivots(sys, rows, split) != static_cast<int>(reducible.size())) {
            rep.log.push_back("template degree " + std::to_string(deg) + ": action matrix not yet reachable");
            continue;
        }
        rep.expansion_degree = deg;
        rep.expanded_rows = static_cast<int>(rows.size());
        rep.expanded_cols = static_cast<int>(supp.size());

        if (options.prune) {
            rows = select_independent_rows(sys, rows, split);
            drop_singleton_rows(sys, rows, basis, reducible);
            rep.log.push_back("  after independent-row selection: " + std::to_string(rows.size()) + " rows");

            // Greedy removal, highest-degree multipliers first.
            std::vector<TemplateRow> candidates = rows;
            std::stable_sort(candidates.begin(), candidates.end(), [](const TemplateRow &a, const TemplateRow &b) {
                return degree(a.multiplier) > degree(b.multiplier);
            });
            for (const auto &cand : candidates) {
                std::vector<TemplateRow> trial;
                for (const auto &row : rows) {
                    if (row.equation != cand.equation || row.multiplier != cand.multiplier) {
                        trial.push_back(row);
                    }
                }
                if (trial.size() == rows.size()) {
                    continue; // already removed by a singleton cascade
                }
                drop_singleton_rows(sys, trial, basis, reducible);
                const std::set<Monomial> tsupp = support(sys, trial);
                if (!reducible_in_support(tsupp, reducible)) {
                    continue;
                }
                const ColumnSplit tsplit = split_columns(tsupp, basis, reducible);
                if (reducible_pivots(sys, trial, tsplit) == static_cast<int>(reducible.size())) {
                    rows.swap(trial);
                }
            }
            supp = support(sys, rows);
            split = split_columns(supp, basis, reducible);
        }

        std::vector<int> epivots;
        if (reducible_pivots(sys, rows, split, &epivots) != static_cast<int>(reducible.size())) {
            throw TemplateError("template generation: pruning broke reducibility (internal error)");
        }
        TemplateRecipe recipe;
        recipe.action_variable = options.action_variable;
        recipe.basis = split.basis;
        recipe.reducible = split.reducible;
        recipe.excessive = split.excessive;
        for (int c = 0; c < static_cast<int>(split.excessive.size()); ++c) {
            if (std::find(epivots.begin(), epivots.end(), c) == epivots.end()) {
                recipe.nonpivot_excessive.push_back(c);
            }
        }
        recipe.rows = rows;
        EliminationTemplate tmpl(std::move(recipe));
        rep.rows = tmpl.num_rows();
        rep.cols = tmpl.num_cols();
        return tmpl;
    }
    throw TemplateError("template generation failed: no expansion up to degree " +
                        std::to_string(options.max_degree) + " reduces the action monomials (" + diag.str() + ")");
}

bool template_reduces(const EliminationTemplate &tmpl, const PolynomialSystem<ModP> &system) {
    const auto &r = tmpl.recipe();
    ColumnSplit split{r.excessive, r.reducible, r.basis};
    return reducible_pivots(system, r.rows, split) == tmpl.num_reducible();
}

} // namespace grsrp
