#include "whichpath/scenario.hpp"

#include "gtest/gtest.h"
#include "whichpath/presence.hpp"

using namespace whichpath;

namespace {

const char* kNested = R"(scenario nested
path IN { probe }
path C { probe }
path E { probe }
path A {}
path B {}
split BS1 IN -> C, E ratio 1/3
split BS2 E -> A, B ratio 1/2
detect C
)";

std::string sliceAt(const std::string& src, const ParseDiagnostic& d) {
    std::size_t line = 1, pos = 0;
    while (line < d.line) {
        pos = src.find('\n', pos);
        if (pos == std::string::npos) return {};
        ++pos;
        ++line;
    }
    return src.substr(pos + d.column - 1, d.length);
}

const ParseDiagnostic& firstError(const ParseResult& r) {
    for (const auto& d : r.diagnostics)
        if (d.severity == Severity::Error) return d;
    throw std::logic_error("no error diagnostic");
}

bool mentions(const ParseResult& r, const std::string& text) {
    for (const auto& d : r.diagnostics)
        if (d.message.find(text) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST(Parse, minimal_one_path_circuit) {
    const auto r = parse("scenario s\npath IN { probe }\ndetect IN");
    ASSERT_TRUE(r.ok()) << r.errorText();
    EXPECT_EQ(r.scenario->name, "s");
    EXPECT_EQ(r.scenario->ancillaCount(), 1u);
    const Alpha a = alphaAnalytic(r.scenario->circuit, "IN");
    EXPECT_EQ(a.value, Complex(1.0));
}

TEST(Parse, ninety_percent_interferometer) {
    const auto r = parse(R"(scenario b90
path IN { probe }
path A { mirror; probe; marker MA }
path B { mirror; probe }
path OUT {}
path DARK {}
split BS1 IN -> A, B ratio 9/10
merge BS2 A, B -> OUT, DARK ratio 9/10
detect OUT
expect A = 9/10
)");
    ASSERT_TRUE(r.ok()) << r.errorText();
    const Scenario& s = *r.scenario;
    EXPECT_NEAR(weakValueOracle(s.circuit, "A").value.real(), 0.9, 1e-12);
    EXPECT_EQ(s.expectedFor("A"), Complex(0.9));
    EXPECT_FALSE(s.expectedFor("B").has_value());
    EXPECT_EQ(s.circuit.couplers()[0].ratio.fraction, (std::pair<std::int64_t, std::int64_t>{9, 10}));
}

TEST(Parse, ratio_outside_unit_interval) {
    const std::string src = "scenario s\npath IN {}\npath C {}\npath E {}\nsplit BS1 IN -> C, E ratio 2\ndetect C\n";
    const auto r = parse(src);
    ASSERT_FALSE(r.ok());
    const auto& d = firstError(r);
    EXPECT_EQ(d.message, "ratio outside [0,1]");
    EXPECT_EQ(d.line, 5u);
    EXPECT_EQ(d.column, 28u);
    EXPECT_EQ(sliceAt(src, d), "2");
}

TEST(Parse, negative_ratio_points_at_sign) {
    const std::string src = "scenario s\npath IN {}\npath C {}\npath E {}\nsplit BS1 IN -> C, E ratio -1/2\ndetect C\n";
    const auto r = parse(src);
    ASSERT_FALSE(r.ok());
    EXPECT_EQ(firstError(r).message, "ratio outside [0,1]");
    EXPECT_EQ(sliceAt(src, firstError(r)), "-");
}

TEST(Parse, decimal_and_exponent_numbers) {
    const auto r = parse(
        "scenario s\npath IN {}\npath C { phase 1.5e-1; probe }\npath E { phase -3pi/4 }\n"
        "split BS1 IN -> C, E ratio 0.25\ndetect C\nexpect C = 1.5-2.5e-1i\n");
    ASSERT_TRUE(r.ok()) << r.errorText();
    const Circuit& c = r.scenario->circuit;
    EXPECT_EQ(c.couplers()[0].ratio.probability, 0.25);
    EXPECT_FALSE(c.couplers()[0].ratio.fraction.has_value());
    EXPECT_EQ(c.path("C").elements[0].phase.radians, 0.15);
    EXPECT_EQ(c.path("E").elements[0].phase.piFraction, (std::pair<std::int64_t, std::int64_t>{-3, 4}));
    EXPECT_EQ(r.scenario->expected[0].second, Complex(1.5, -0.25));
}

TEST(Parse, complex_literal_forms) {
    const auto r = parse("scenario s\npath IN { probe X; probe Y; probe Z }\ndetect IN\n"
                         "expect X = 2i\nexpect Y = -1/2+1/4i\nexpect Z = -3\n");
    ASSERT_TRUE(r.ok()) << r.errorText();
    EXPECT_EQ(r.scenario->expectedFor("X"), Complex(0, 2));
    EXPECT_EQ(r.scenario->expectedFor("Y"), Complex(-0.5, 0.25));
    EXPECT_EQ(r.scenario->expectedFor("Z"), Complex(-3));
}

TEST(Parse, diagnostics_slice_their_token) {
    struct Case {
        std::string src;
        std::string token;
        std::string message;
    };
    const std::vector<Case> cases = {
        {"scenario s\npath IN { probe }\ndetect NOWHERE\n", "NOWHERE", "undeclared label"},
        {"scenario s\npath IN { probe }\npath IN {}\ndetect IN\n", "IN", "duplicate identifier"},
        {"scenario s\npath IN { probe P; probe P }\ndetect IN\n", "P", "duplicate identifier"},
        {"scenario s\npath IN { probe; gadget }\ndetect IN\n", "gadget", "unknown element"},
        {"scenario s\nwibble IN\n", "wibble", "unknown keyword"},
        {"scenario s\npath IN {}\ndetect IN\nexpect Q = 1\n", "Q", "undeclared label"},
        {"scenario s\npath IN { device tau }\ndetect IN\n", "tau", "expected 'pi'"},
        {"scenario s\npath IN {}\npath C {}\npath E {}\nsplit BS1 IN -> C, D ratio 1/2\ndetect C\n", "D",
         "undeclared label"},
        {"scenario s\npath IN { phase pi/0 }\ndetect IN\n", "0", "division by zero"},
    };
    for (const auto& c : cases) {
        const auto r = parse(c.src);
        ASSERT_FALSE(r.ok()) << c.src;
        const auto& d = firstError(r);
        EXPECT_NE(d.message.find(c.message), std::string::npos) << d.message;
        EXPECT_EQ(sliceAt(c.src, d), c.token) << c.src << " -> " << d.message;
    }
}

TEST(Parse, missing_detect) {
    const auto r = parse("scenario s\npath IN { probe }\n");
    ASSERT_FALSE(r.ok());
    EXPECT_TRUE(mentions(r, "missing detect"));
    EXPECT_EQ(firstError(r).line, 1u);
}

TEST(Parse, structural_errors) {
    EXPECT_TRUE(mentions(parse("scenario s\npath IN {}\npath X {}\ndetect IN\n"), "more than one source"));
    EXPECT_TRUE(mentions(parse("scenario s\npath IN {}\ndetect IN\ndetect IN\n"), "duplicate detect"));
    EXPECT_TRUE(mentions(parse(std::string(kNested) + "cut C\n"), "not complete"));
    EXPECT_TRUE(mentions(parse("scenario s\npath IN {}\npath A {}\npath B {}\nsplit S IN -> A, A ratio 1/2\n"
                               "detect A\n"),
                         "appears twice"));
    EXPECT_TRUE(mentions(parse("scenario s\npath IN {}\npath A {}\npath B {}\nsplit S IN -> A, B ratio 1/2\n"
                               "detect A\nexpect IN = 1\n"),
                         "no probe site"));
}

TEST(Parse, recovers_and_reports_several_errors) {
    const auto r = parse("scenario s\npath IN { probe; zap }\npath B { phase }\nsplit S X Y\ndetect IN\n");
    ASSERT_FALSE(r.ok());
    EXPECT_GE(r.diagnostics.size(), 3u);
    EXPECT_EQ(r.diagnostics[0].line, 2u);
    EXPECT_EQ(r.diagnostics[1].line, 3u);
    EXPECT_EQ(r.diagnostics[2].line, 4u);
    EXPECT_NE(r.errorText("f.ifz").find("f.ifz:2:"), std::string::npos);
}

TEST(Parse, vanishing_postselection_is_a_warning) {
    const auto r = parse(R"(scenario s
path IN {}
path A { probe }
path B {}
path OUT {}
path DARK {}
split BS1 IN -> A, B ratio 1/2
merge BS2 A, B -> OUT, DARK ratio 1/2
detect DARK
)");
    ASSERT_TRUE(r.ok());
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(r.diagnostics[0].severity, Severity::Warning);
}

TEST(Parse, comments_crlf_and_layout_are_insignificant) {
    const auto plain = parse(kNested);
    ASSERT_TRUE(plain.ok());
    std::string crlf;
    for (char ch : std::string(kNested)) {
        if (ch == '\n') crlf += "  # trailing comment\r\n";
        else crlf += ch;
    }
    const auto a = parse("# leading comment\r\n" + crlf);
    ASSERT_TRUE(a.ok()) << a.errorText();
    EXPECT_EQ(*a.scenario, *plain.scenario);

    const auto b = parse("scenario nested path IN{probe}path C{probe}path E{probe}path A{}path B{}"
                         "split BS1 IN->C,E ratio 1/3 split BS2 E->A,B ratio 1/2 detect C");
    ASSERT_TRUE(b.ok()) << b.errorText();
    EXPECT_EQ(*b.scenario, *plain.scenario);
}

TEST(Serialize, canonical_and_deterministic) {
    const auto r = parse("# note\r\nscenario s\r\npath IN { probe IN ; mirror; phase pi/2 ; probe P2 }\r\n"
                         "detect IN\r\nexpect P2 = 1/2-1i\r\n");
    ASSERT_TRUE(r.ok()) << r.errorText();
    const std::string text = serialize(*r.scenario);
    EXPECT_EQ(text, "scenario s\npath IN { probe; mirror; phase pi/2; probe P2 }\ndetect IN\nexpect P2 = 0.5-1i\n");
    EXPECT_EQ(serialize(*r.scenario), text);
    EXPECT_EQ(text.find('#'), std::string::npos);
}

TEST(Serialize, round_trip_with_every_statement) {
    const auto r = parse(R"(scenario full
ancillas 3
path IN { probe; marker M0 }
path A { mirror; phase -2pi/3; device pi; probe PA }
path B { block; phase 0.7 }
path OUT {}
path DARK {}
split BS1 IN -> A, B ratio 0.3
merge BS2 A, B -> OUT, DARK ratio 2/7
detect OUT
cut A, B
cut OUT, DARK
expect PA = 0.25+3i
)");
    ASSERT_TRUE(r.ok()) << r.errorText();
    const auto again = parse(serialize(*r.scenario));
    ASSERT_TRUE(again.ok()) << again.errorText();
    EXPECT_EQ(*again.scenario, *r.scenario);
    EXPECT_EQ(serialize(*again.scenario), serialize(*r.scenario));
    EXPECT_EQ(again.scenario->ancillaCount(), 3u);
}
