#include "grsrp/elimination_template.h"

#include "grsrp/errors.h"
#include "grsrp/rs_system.h"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace grsrp {

namespace {

void write_monomials(std::ostream &os, std::string_view name, const std::vector<Monomial> &monos) {
    os << name << ' ' << monos.size() << '\n';
    for (const auto &m : monos) {
        for (int v = 0; v < kNumUnknowns; ++v) {
            os << (v ? " " : "") << int(m[v]);
        }
        os << '\n';
    }
}

class Reader {
  public:
    explicit Reader(std::string_view text) {
        std::istringstream is{std::string(text)};
        std::string line;
        while (std::getline(is, line)) {
            ++line_no_;
            const auto hash = line.find('#');
            if (hash != std::string::npos) {
                line.resize(hash);
            }
            std::istringstream ls(line);
            std::string tok;
            while (ls >> tok) {
                tokens_.push_back({tok, line_no_});
            }
        }
    }

    std::string next(std::string_view what) {
        if (pos_ >= tokens_.size()) {
            throw TemplateError("template: unexpected end of input while reading " + std::string(what));
        }
        return tokens_[pos_++].text;
    }

    long next_int(std::string_view what) {
        const std::string tok = next(what);
        try {
            std::size_t used = 0;
            const long v = std::stol(tok, &used);
            if (used != tok.size()) {
                throw std::invalid_argument(tok);
            }
            return v;
        } catch (const std::exception &) {
            throw TemplateError("template line " + std::to_string(tokens_[pos_ - 1].line) + ": expected integer for " +
                                std::string(what) + ", got '" + tok + "'");
        }
    }

    void expect(std::string_view keyword) {
        const std::string tok = next(keyword);
        if (tok != keyword) {
            throw TemplateError("template line " + std::to_string(tokens_[pos_ - 1].line) + ": expected '" +
                                std::string(keyword) + "', got '" + tok + "'");
        }
    }

    Monomial next_monomial(std::string_view what) {
        Monomial m{};
        for (int v = 0; v < kNumUnknowns; ++v) {
            const long e = next_int(what);
            if (e < 0 || e > 32) {
                throw TemplateError("template: exponent out of range in " + std::string(what));
            }
            m[v] = static_cast<std::uint8_t>(e);
        }
        return m;
    }

    std::vector<Monomial> monomial_block(std::string_view keyword) {
        expect(keyword);
        const long n = next_int(keyword);
        if (n < 0 || n > 100000) {
            throw TemplateError("template: bad count for " + std::string(keyword));
        }
        std::vector<Monomial> out(static_cast<std::size_t>(n));
        for (auto &m : out) {
            m = next_monomial(keyword);
        }
        return out;
    }

    bool done() const { return pos_ >= tokens_.size(); }

  private:
    struct Token {
        std::string text;
        int line;
    };
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    int line_no_ = 0;
};

} // namespace

EliminationTemplate::EliminationTemplate(TemplateRecipe recipe) : recipe_(std::move(recipe)) {
    const auto &r = recipe_;
    if (r.action_variable < 0 || r.action_variable >= kNumUnknowns) {
        throw TemplateError("template: action variable out of range");
    }
    if (r.basis.empty() || r.rows.empty()) {
        throw TemplateError("template: empty basis or row set");
    }

    std::vector<Monomial> columns;
    columns.insert(columns.end(), r.excessive.begin(), r.excessive.end());
    columns.insert(columns.end(), r.reducible.begin(), r.reducible.end());
    columns.insert(columns.end(), r.basis.begin(), r.basis.end());
    column_lookup_.reserve(columns.size());
    for (int c = 0; c < static_cast<int>(columns.size()); ++c) {
        column_lookup_.emplace_back(columns[c], c);
    }
    std::sort(column_lookup_.begin(), column_lookup_.end());
    for (std::size_t k = 1; k < column_lookup_.size(); ++k) {
        if (column_lookup_[k].first == column_lookup_[k - 1].first) {
            throw TemplateError("template: duplicate column monomial " + to_string(column_lookup_[k].first));
        }
    }

    column_has_pivot_.assign(num_excessive() + num_reducible(), true);
    for (int c : r.nonpivot_excessive) {
        if (c < 0 || c >= num_excessive()) {
            throw TemplateError("template: non-pivot column index out of range");
        }
        column_has_pivot_[c] = false;
    }

    row_columns_.reserve(r.rows.size());
    for (const auto &row : r.rows) {
        if (row.equation < 0 || row.equation > kMinimalSampleSize) {
            throw TemplateError("template: row equation index out of range");
        }
        std::array<int, 12> cols;
        cols.fill(-1);
        if (row.equation < kMinimalSampleSize) {
            const auto &monos = epipolar_monomials();
            for (int k = 0; k < kNumEpipolarTerms; ++k) {
                cols[k] = column_of(multiply(monos[k], row.multiplier));
            }
        } else {
            const auto &monos = scale_monomials();
            for (int k = 0; k < kNumScaleTerms; ++k) {
                cols[k] = column_of(multiply(monos[k], row.multiplier));
            }
        }
        if (std::any_of(cols.begin(), cols.begin() + (row.equation < kMinimalSampleSize ? 12 : 4),
                        [](int c) { return c < 0; })) {
            throw TemplateError("template: row " + to_string(row.multiplier) + " touches a monomial with no column");
        }
        row_columns_.push_back(cols);
    }

    const int nb = num_basis();
    action_map_.resize(nb);
    const Monomial x = unit_monomial(r.action_variable);
    for (int k = 0; k < nb; ++k) {
        const Monomial xb = multiply(x, r.basis[k]);
        const auto in_basis = std::find(r.basis.begin(), r.basis.end(), xb);
        if (in_basis != r.basis.end()) {
            action_map_[k] = {true, static_cast<int>(in_basis - r.basis.begin())};
            continue;
        }
        const auto in_red = std::find(r.reducible.begin(), r.reducible.end(), xb);
        if (in_red == r.reducible.end()) {
            throw TemplateError("template: action monomial " + to_string(xb) + " is neither basis nor reducible");
        }
        action_map_[k] = {false, static_cast<int>(in_red - r.reducible.begin())};
    }

    const auto basis_pos = [&](const Monomial &m) {
        const auto it = std::find(r.basis.begin(), r.basis.end(), m);
        if (it == r.basis.end()) {
            throw TemplateError("template: basis lacks monomial " + to_string(m) + " needed to read off roots");
        }
        return static_cast<int>(it - r.basis.begin());
    };
    one_index_ = basis_pos(Monomial{});
    for (int v = 0; v < kNumUnknowns; ++v) {
        unknown_index_[v] = basis_pos(unit_monomial(v));
    }
}

int EliminationTemplate::column_of(const Monomial &m) const {
    const auto it = std::lower_bound(column_lookup_.begin(), column_lookup_.end(), std::make_pair(m, -1));
    if (it == column_lookup_.end() || it->first != m) {
        return -1;
    }
    return it->second;
}

std::string serialize_template(const EliminationTemplate &tmpl) {
    const auto &r = tmpl.recipe();
    std::ostringstream os;
    os << EliminationTemplate::kMagic << '\n';
    os << "version " << EliminationTemplate::kFormatVersion << '\n';
    os << "# " << tmpl.num_rows() << " rows x " << tmpl.num_cols() << " columns (" << tmpl.num_excessive()
       << " excessive, " << tmpl.num_reducible() << " reducible, " << tmpl.num_basis() << " basis)\n";
    os << "# monomial exponents are listed in the order";
    for (const char *n : kUnknownNames) {
        os << ' ' << n;
    }
    os << '\n';
    os << "action " << kUnknownNames[r.action_variable] << '\n';
    write_monomials(os, "basis", r.basis);
    write_monomials(os, "reducible", r.reducible);
    write_monomials(os, "excessive", r.excessive);
    os << "nonpivot " << r.nonpivot_excessive.size();
    for (int c : r.nonpivot_excessive) {
        os << ' ' << c;
    }
    os << '\n';
    os << "rows " << r.rows.size() << '\n';
    for (const auto &row : r.rows) {
        os << row.equation;
        for (int v = 0; v < kNumUnknowns; ++v) {
            os << ' ' << int(row.multiplier[v]);
        }
        os << '\n';
    }
    os << "end\n";
    return os.str();
}

EliminationTemplate parse_template(std::string_view text) {
    Reader in(text);
    in.expect(EliminationTemplate::kMagic);
    in.expect("version");
    const long version = in.next_int("version");
    if (version != EliminationTemplate::kFormatVersion) {
        throw TemplateError("template: unsupported version " + std::to_string(version) + " (expected " +
                            std::to_string(EliminationTemplate::kFormatVersion) + ")");
    }
    TemplateRecipe r;
    in.expect("action");
    const std::string action = in.next("action");
    const auto it = std::find(kUnknownNames.begin(), kUnknownNames.end(), action);
    if (it == kUnknownNames.end()) {
        throw TemplateError("template: unknown action variable '" + action + "'");
    }
    r.action_variable = static_cast<int>(it - kUnknownNames.begin());
    r.basis = in.monomial_block("basis");
    r.reducible = in.monomial_block("reducible");
    r.excessive = in.monomial_block("excessive");
    in.expect("nonpivot");
    const long np = in.next_int("nonpivot");
    for (long k = 0; k < np; ++k) {
        r.nonpivot_excessive.push_back(static_cast<int>(in.next_int("nonpivot")));
    }
    in.expect("rows");
    const long nrows = in.next_int("rows");
    if (nrows < 0 || nrows > 100000) {
        throw TemplateError("template: bad row count");
    }
    for (long k = 0; k < nrows; ++k) {
        TemplateRow row;
        row.equation = static_cast<int>(in.next_int("row equation"));
        row.multiplier = in.next_monomial("row multiplier");
        r.rows.push_back(row);
    }
    in.expect("end");
    if (!in.done()) {
        throw TemplateError("template: trailing content after 'end'");
    }
    return EliminationTemplate(std::move(r));
}

EliminationTemplate load_template(const std::filesystem::path &path) {
    std::ifstream is(path);
    if (!is) {
        throw TemplateError("template: cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_template(ss.str());
}

void save_template(const EliminationTemplate &tmpl, const std::filesystem::path &path) {
    std::ofstream os(path);
    if (!os) {
        throw TemplateError("template: cannot write " + path.string());
    }
    os << serialize_template(tmpl);
}

const EliminationTemplate &default_template() {
    static const EliminationTemplate tmpl = parse_template(embedded_template_text());
    return tmpl;
}

} // namespace grsrp
