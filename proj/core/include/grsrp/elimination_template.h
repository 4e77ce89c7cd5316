#pragma once

#include "grsrp/polynomial.h"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace grsrp {

// One template row: equation `equation` (0-4 epipolar, 5 scale) multiplied by
// the monomial `multiplier`.
struct TemplateRow {
    int equation = 0;
    Monomial multiplier{};
};

// Serialized content of an elimination template. Columns are ordered
// excessive monomials first, then reducible monomials (action variable times a
// basis monomial, outside the basis), then the quotient-ring basis.
struct TemplateRecipe {
    int action_variable = kNumUnknowns - 1;
    std::vector<Monomial> basis;
    std::vector<Monomial> reducible;
    std::vector<Monomial> excessive;
    // Excessive columns (indices into `excessive`) that carry no pivot when the
    // template is reduced at a generic instance; elimination skips them.
    std::vector<int> nonpivot_excessive;
    std::vector<TemplateRow> rows;
};

// Validated template with the lookup tables solve() needs precomputed.
// Immutable after construction; safe to share across threads.
class EliminationTemplate {
  public:
    static constexpr int kFormatVersion = 1;
    static constexpr std::string_view kMagic = "GRSRP-ELIMINATION-TEMPLATE";

    explicit EliminationTemplate(TemplateRecipe recipe);

    const TemplateRecipe &recipe() const { return recipe_; }
    int num_rows() const { return static_cast<int>(recipe_.rows.size()); }
    int num_cols() const { return num_excessive() + num_reducible() + num_basis(); }
    int num_excessive() const { return static_cast<int>(recipe_.excessive.size()); }
    int num_reducible() const { return static_cast<int>(recipe_.reducible.size()); }
    int num_basis() const { return static_cast<int>(recipe_.basis.size()); }
    int action_variable() const { return recipe_.action_variable; }

    // Column index of every term of the row's equation, in the term order of
    // epipolar_monomials() / scale_monomials(). Unused trailing slots are -1.
    const std::vector<std::array<int, 12>> &row_columns() const { return row_columns_; }
    const std::vector<bool> &column_has_pivot() const { return column_has_pivot_; }

    // For basis monomial k, x * b_k is either basis monomial `index` or
    // reducible monomial `index`.
    struct ActionEntry {
        bool in_basis = false;
        int index = 0;
    };
    const std::vector<ActionEntry> &action_map() const { return action_map_; }

    // Position of 1 and of each unknown inside the basis.
    int basis_index_of_one() const { return one_index_; }
    int basis_index_of_unknown(int var) const { return unknown_index_[var]; }
    int column_of(const Monomial &m) const;

  private:
    TemplateRecipe recipe_;
    std::vector<std::array<int, 12>> row_columns_;
    std::vector<bool> column_has_pivot_;
    std::vector<ActionEntry> action_map_;
    int one_index_ = -1;
    std::array<int, kNumUnknowns> unknown_index_{};
    std::vector<std::pair<Monomial, int>> column_lookup_;
};

std::string serialize_template(const EliminationTemplate &tmpl);
// Throws TemplateError on a bad magic header, version mismatch or malformed body.
EliminationTemplate parse_template(std::string_view text);
EliminationTemplate load_template(const std::filesystem::path &path);
void save_template(const EliminationTemplate &tmpl, const std::filesystem::path &path);

// Template compiled into the library from core/data/grsrp_template.txt.
std::string_view embedded_template_text();
const EliminationTemplate &default_template();

} // namespace grsrp
