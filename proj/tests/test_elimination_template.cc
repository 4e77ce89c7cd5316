#include "grsrp/elimination_template.h"
#include "grsrp/errors.h"
#include "grsrp/template_generator.h"

#include <gtest/gtest.h>

#include <string>

namespace grsrp {
namespace {

TEST(DefaultTemplate, ShapeAndBasis) {
    const EliminationTemplate &t = default_template();
    EXPECT_EQ(t.num_basis(), 20);
    EXPECT_EQ(t.action_variable(), 5);
    EXPECT_EQ(t.num_rows(), 224);
    EXPECT_EQ(t.num_cols(), 244);
    // Same order of magnitude as the published 205 x 225 instance.
    EXPECT_NEAR(t.num_rows(), 205, 40);
    EXPECT_NEAR(t.num_cols(), 225, 40);
    EXPECT_GE(t.basis_index_of_one(), 0);
    for (int v = 0; v < kNumUnknowns; ++v) {
        EXPECT_GE(t.basis_index_of_unknown(v), 0) << kUnknownNames[v];
    }
}

TEST(DefaultTemplate, MatchesShippedFile) {
    EXPECT_EQ(serialize_template(load_template(GRSRP_TEMPLATE_FILE)), serialize_template(default_template()));
}

TEST(DefaultTemplate, ReducesOnRandomGenericInstances) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        EXPECT_TRUE(template_reduces(default_template(), random_probe_system(seed))) << "seed " << seed;
    }
}

TEST(TemplateFormat, RoundTrip) {
    const std::string text = serialize_template(default_template());
    const EliminationTemplate again = parse_template(text);
    EXPECT_EQ(serialize_template(again), text);
}

TEST(TemplateFormat, RejectsBadMagic) {
    std::string text = serialize_template(default_template());
    text[0] = 'X';
    EXPECT_THROW(parse_template(text), TemplateError);
}

TEST(TemplateFormat, RejectsVersionMismatch) {
    std::string text = serialize_template(default_template());
    const auto pos = text.find("version 1");
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos, 9, "version 2");
    EXPECT_THROW(parse_template(text), TemplateError);
}

TEST(TemplateFormat, RejectsTruncatedBody) {
    const std::string text = serialize_template(default_template());
    EXPECT_THROW(parse_template(text.substr(0, text.size() / 2)), TemplateError);
}

TEST(Generator, QuotientHasTwentyStandardMonomials) {
    const auto sys = random_probe_system(7);
    EXPECT_EQ(standard_monomials(sys, 6).size(), 20u);
}

TEST(Generator, RegeneratesAWorkingTemplate) {
    GeneratorReport report;
    const EliminationTemplate t = generate_template({}, &report);
    EXPECT_EQ(report.quotient_dimension, 20);
    EXPECT_EQ(t.num_basis(), 20);
    for (std::uint64_t seed = 1000; seed < 1010; ++seed) {
        EXPECT_TRUE(template_reduces(t, random_probe_system(seed)));
    }
}

TEST(Generator, FailsWithDiagnosticOnWrongSolutionCount) {
    GeneratorOptions options;
    options.expected_solutions = 19;
    options.max_degree = 6;
    EXPECT_THROW(generate_template(options), TemplateError);
}

} // namespace
} // namespace grsrp
