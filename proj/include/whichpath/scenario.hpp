// scenario.hpp
// Line-oriented scenario format (.ifz) describing an interferometer, its
// probe sites, markers, cuts and expected presence values.
//
//   scenario nested
//   path IN { probe }
//   path C  { mirror; probe }
//   path E  { probe; marker ME }
//   split BS1 IN -> C, E ratio 1/3
//   merge BS3 A, B -> X, F ratio 1/2
//   detect OUT
//   cut C, A, B
//   expect B = -1
//
// `ratio` is the reflection probability. The first output of a splitter is
// the reflected port of its first input: u' = r u + t v, v' = t u - r v.
// `#` starts a comment. Whitespace, including line breaks, is insignificant.

#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "whichpath/circuit.hpp"
#include "whichpath/presence.hpp"

namespace whichpath {

struct Scenario {
    std::string name;
    Circuit circuit;
    std::vector<std::pair<std::string, Complex>> expected;  // declaration order

    std::size_t ancillaCount() const { return circuit.ancillas(); }

    std::optional<Complex> expectedFor(const std::string& site) const {
        for (const auto& [s, v] : expected)
            if (s == site) return v;
        return std::nullopt;
    }

    bool operator==(const Scenario&) const = default;
};

enum class Severity { Error, Warning };

struct ParseDiagnostic {
    std::size_t line = 1;    // 1-based
    std::size_t column = 1;  // 1-based, in bytes
    std::size_t length = 0;  // bytes of the offending token
    std::string message;
    Severity severity = Severity::Error;
};

struct ParseResult {
    std::optional<Scenario> scenario;
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const { return scenario.has_value(); }

    std::string errorText(std::string_view filename = "<input>") const {
        std::string out;
        for (const auto& d : diagnostics) {
            out += std::string(filename) + ":" + std::to_string(d.line) + ":" + std::to_string(d.column) + ": " +
                   (d.severity == Severity::Error ? "error: " : "warning: ") + d.message + "\n";
        }
        return out;
    }
};

namespace detail {

enum class Tok { Ident, Number, LBrace, RBrace, Semi, Comma, Arrow, Eq, Plus, Minus, Slash, Invalid, End };

struct Token {
    Tok kind = Tok::End;
    std::string_view text;
    std::size_t line = 1;
    std::size_t column = 1;
    bool startsLine = false;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        bool lineStart = true;
        while (true) {
            // whitespace and comments
            while (pos_ < src_.size()) {
                const char ch = src_[pos_];
                if (ch == '\n') {
                    advance();
                    lineStart = true;
                } else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\f' || ch == '\v') {
                    advance();
                } else if (ch == '#') {
                    while (pos_ < src_.size() && src_[pos_] != '\n') advance();
                } else {
                    break;
                }
            }
            Token t;
            t.line = line_;
            t.column = col_;
            t.startsLine = lineStart;
            lineStart = false;
            if (pos_ >= src_.size()) {
                t.kind = Tok::End;
                out.push_back(t);
                return out;
            }
            const std::size_t start = pos_;
            const char ch = src_[pos_];
            if (isIdentStart(ch)) {
                while (pos_ < src_.size() && isIdentChar(src_[pos_])) advance();
                t.kind = Tok::Ident;
            } else if (isDigit(ch) || (ch == '.' && pos_ + 1 < src_.size() && isDigit(src_[pos_ + 1]))) {
                lexNumber();
                t.kind = Tok::Number;
            } else if (ch == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
                advance();
                advance();
                t.kind = Tok::Arrow;
            } else {
                advance();
                switch (ch) {
                    case '{': t.kind = Tok::LBrace; break;
                    case '}': t.kind = Tok::RBrace; break;
                    case ';': t.kind = Tok::Semi; break;
                    case ',': t.kind = Tok::Comma; break;
                    case '=': t.kind = Tok::Eq; break;
                    case '+': t.kind = Tok::Plus; break;
                    case '-': t.kind = Tok::Minus; break;
                    case '/': t.kind = Tok::Slash; break;
                    default: t.kind = Tok::Invalid; break;
                }
            }
            t.text = src_.substr(start, pos_ - start);
            out.push_back(t);
        }
    }

private:
    static bool isDigit(char c) { return c >= '0' && c <= '9'; }
    static bool isIdentStart(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
    static bool isIdentChar(char c) { return isIdentStart(c) || isDigit(c); }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void lexNumber() {
        while (pos_ < src_.size() && isDigit(src_[pos_])) advance();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            advance();
            while (pos_ < src_.size() && isDigit(src_[pos_])) advance();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && isDigit(src_[look])) {
                while (pos_ < look) advance();
                while (pos_ < src_.size() && isDigit(src_[pos_])) advance();
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

inline bool isStatementKeyword(std::string_view s) {
    return s == "path" || s == "split" || s == "merge" || s == "detect" || s == "cut" || s == "expect" ||
           s == "ancillas";
}

struct ParseFailure {};

/// Position-tagged name as it appeared in the source.
struct Name {
    std::string text;
    Token tok;
};

struct RawElement {
    Element element;
    Token tok;  // keyword or id token
};

struct RawPath {
    Name label;
    std::vector<RawElement> elements;
};

struct RawCoupler {
    Name name;
    std::vector<Name> inputs;
    std::pair<Name, Name> outputs;
    Ratio ratio;
};

struct RawExpect {
    Name site;
    Complex value;
};

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

    ParseResult run();

private:
    const Token& peek() const { return toks_[i_]; }
    const Token& next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

    bool atKeyword(std::string_view kw) const { return peek().kind == Tok::Ident && peek().text == kw; }

    [[noreturn]] void fail(const Token& t, std::string msg) {
        error(t, std::move(msg));
        throw ParseFailure{};
    }

    void error(const Token& t, std::string msg, Severity sev = Severity::Error) {
        if (diags_.size() >= kMaxDiagnostics) return;
        if (sev == Severity::Error) ++errors_;
        diags_.push_back({t.line, t.column, std::max<std::size_t>(t.text.size(), t.kind == Tok::End ? 0 : 1),
                          std::move(msg), sev});
    }

    static std::string describe(const Token& t) {
        if (t.kind == Tok::End) return "end of input";
        return "'" + std::string(t.text) + "'";
    }

    const Token& expect(Tok kind, std::string_view what) {
        if (peek().kind != kind) fail(peek(), "expected " + std::string(what) + ", found " + describe(peek()));
        return next();
    }

    void expectKeyword(std::string_view kw) {
        if (!atKeyword(kw)) fail(peek(), "expected '" + std::string(kw) + "', found " + describe(peek()));
        next();
    }

    Name ident(std::string_view what) {
        const Token& t = expect(Tok::Ident, what);
        return {std::string(t.text), t};
    }

    void recover() {
        while (peek().kind != Tok::End && !(peek().startsLine && peek().kind == Tok::Ident &&
                                            isStatementKeyword(peek().text)))
            next();
    }

    double number(const Token& t) {
        double v = 0.0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size()) fail(t, "malformed number " + describe(t));
        return v;
    }

    static bool isInteger(const Token& t) {
        return t.kind == Tok::Number && std::all_of(t.text.begin(), t.text.end(), [](char c) {
                   return c >= '0' && c <= '9';
               });
    }

    std::int64_t integer(const Token& t) {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size()) fail(t, "integer out of range " + describe(t));
        return v;
    }

    struct Real {
        double value = 0.0;
        std::optional<std::pair<std::int64_t, std::int64_t>> fraction;
        Token tok;
    };

    /// [sign] NUMBER [ "/" NUMBER ]
    Real real() {
        Real r;
        r.tok = peek();
        bool negative = false;
        if (peek().kind == Tok::Minus || peek().kind == Tok::Plus) negative = next().kind == Tok::Minus;
        const Token& a = expect(Tok::Number, "a number");
        if (peek().kind == Tok::Slash) {
            next();
            const Token& b = expect(Tok::Number, "a denominator");
            if (isInteger(a) && isInteger(b)) {
                const std::int64_t num = integer(a), den = integer(b);
                if (den == 0) fail(b, "division by zero");
                r.fraction = std::pair{negative ? -num : num, den};
                r.value = static_cast<double>(r.fraction->first) / static_cast<double>(den);
                return r;
            }
            const double den = number(b);
            if (den == 0.0) fail(b, "division by zero");
            r.value = (negative ? -1.0 : 1.0) * number(a) / den;
            return r;
        }
        r.value = (negative ? -1.0 : 1.0) * number(a);
        return r;
    }

    Angle angle() {
        bool negative = false;
        if (peek().kind == Tok::Minus || peek().kind == Tok::Plus) negative = next().kind == Tok::Minus;
        // [INT] "pi" ["/" INT]
        const bool coefficientThenPi = isInteger(peek()) && toks_[i_ + 1].kind == Tok::Ident && toks_[i_ + 1].text == "pi";
        if (atKeyword("pi") || coefficientThenPi) {
            std::int64_t num = 1, den = 1;
            if (coefficientThenPi) num = integer(next());
            next();  // pi
            if (peek().kind == Tok::Slash) {
                next();
                const Token& d = peek();
                if (!isInteger(d)) fail(d, "expected an integer denominator, found " + describe(d));
                den = integer(next());
                if (den == 0) fail(d, "division by zero");
            }
            return Angle::piTimes(negative ? -num : num, den);
        }
        const Token& t = expect(Tok::Number, "a phase in radians or a multiple of pi");
        const double v = number(t);
        return Angle::rad(negative ? -v : v);
    }

    Complex complexLiteral() {
        const Real first = real();
        if (atKeyword("i")) {
            next();
            return {0.0, first.value};
        }
        if (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const Real second = real();
            if (!atKeyword("i")) fail(peek(), "expected 'i' after imaginary part, found " + describe(peek()));
            next();
            return {first.value, second.value};
        }
        return {first.value, 0.0};
    }

    RawElement element() {
        const Token kw = peek();
        if (kw.kind != Tok::Ident) fail(kw, "expected a path element, found " + describe(kw));
        next();
        if (kw.text == "probe") {
            if (peek().kind == Tok::Ident) {
                const Token id = next();
                return {Element::probe(std::string(id.text)), id};
            }
            return {Element::probe(""), kw};
        }
        if (kw.text == "device") {
            if (!atKeyword("pi")) fail(peek(), "expected 'pi' after 'device', found " + describe(peek()));
            next();
            return {Element::piDevice(), kw};
        }
        if (kw.text == "block") return {Element::block(), kw};
        if (kw.text == "mirror") return {Element::mirror(), kw};
        if (kw.text == "marker") {
            const Name id = ident("a marker id");
            return {Element::marker(id.text), id.tok};
        }
        if (kw.text == "phase") return {Element::phaseShift(angle()), kw};
        fail(kw, "unknown element " + describe(kw));
    }

    void pathStatement() {
        RawPath p;
        p.label = ident("a path label");
        expect(Tok::LBrace, "'{'");
        if (peek().kind != Tok::RBrace) {
            p.elements.push_back(element());
            while (peek().kind == Tok::Semi) {
                next();
                if (peek().kind == Tok::RBrace) break;
                p.elements.push_back(element());
            }
        }
        expect(Tok::RBrace, "';' or '}'");
        for (auto& e : p.elements)
            if (e.element.kind == ElementKind::Probe && e.element.id.empty()) e.element.id = p.label.text;
        paths_.push_back(std::move(p));
    }

    Ratio ratioClause() {
        expectKeyword("ratio");
        const Real r = real();
        if (!(r.value >= 0.0 && r.value <= 1.0)) fail(r.tok, "ratio outside [0,1]");
        if (r.fraction) return Ratio::of(r.fraction->first, r.fraction->second);
        return Ratio::decimal(r.value);
    }

    void couplerStatement(bool merge) {
        RawCoupler c;
        c.name = ident("a beam splitter name");
        c.inputs.push_back(ident("an input path"));
        if (merge) {
            expect(Tok::Comma, "','");
            c.inputs.push_back(ident("an input path"));
        }
        expect(Tok::Arrow, "'->'");
        c.outputs.first = ident("an output path");
        expect(Tok::Comma, "','");
        c.outputs.second = ident("an output path");
        c.ratio = ratioClause();
        couplers_.push_back(std::move(c));
    }

    void statement() {
        const Token kw = peek();
        if (kw.kind != Tok::Ident) fail(kw, "expected a statement, found " + describe(kw));
        next();
        if (kw.text == "path") {
            pathStatement();
        } else if (kw.text == "split") {
            couplerStatement(false);
        } else if (kw.text == "merge") {
            couplerStatement(true);
        } else if (kw.text == "detect") {
            detects_.push_back(ident("a path label"));
        } else if (kw.text == "cut") {
            std::vector<Name> cut{ident("a path label")};
            while (peek().kind == Tok::Comma) {
                next();
                cut.push_back(ident("a path label"));
            }
            cuts_.push_back(std::move(cut));
        } else if (kw.text == "expect") {
            RawExpect e;
            e.site = ident("a probe id");
            expect(Tok::Eq, "'='");
            e.value = complexLiteral();
            expects_.push_back(std::move(e));
        } else if (kw.text == "ancillas") {
            const Token& n = peek();
            if (!isInteger(n)) fail(n, "expected an integer ancilla count, found " + describe(n));
            const std::int64_t v = integer(next());
            if (v < 1 || v > 16) fail(n, "ancilla count outside [1,16]");
            if (ancillas_) fail(kw, "duplicate 'ancillas' statement");
            ancillas_ = static_cast<std::size_t>(v);
        } else {
            fail(kw, "unknown keyword " + describe(kw));
        }
    }

    std::optional<Circuit> resolve();

    static constexpr std::size_t kMaxDiagnostics = 64;

    std::vector<Token> toks_;
    std::size_t i_ = 0;
    std::vector<ParseDiagnostic> diags_;
    std::size_t errors_ = 0;

    Token header_;
    std::string name_;
    std::optional<std::size_t> ancillas_;
    std::vector<RawPath> paths_;
    std::vector<RawCoupler> couplers_;
    std::vector<Name> detects_;
    std::vector<std::vector<Name>> cuts_;
    std::vector<RawExpect> expects_;
};

inline ParseResult Parser::run() {
    ParseResult result;
    header_ = peek();
    try {
        expectKeyword("scenario");
        name_ = ident("a scenario name").text;
    } catch (const ParseFailure&) {
        result.diagnostics = std::move(diags_);
        return result;
    }
    while (peek().kind != Tok::End) {
        try {
            statement();
        } catch (const ParseFailure&) {
            recover();
        }
    }
    if (errors_ == 0) {
        try {
            if (auto circuit = resolve()) {
                std::vector<std::pair<std::string, Complex>> expected;
                for (const auto& e : expects_) expected.emplace_back(e.site.text, e.value);
                result.scenario = Scenario{name_, std::move(*circuit), std::move(expected)};
            }
        } catch (const ParseFailure&) {
        }
    }
    result.diagnostics = std::move(diags_);
    return result;
}

inline std::optional<Circuit> Parser::resolve() {
    std::map<std::string, Token> declared;
    std::set<std::string> probeIds, markerIds;
    for (const auto& p : paths_) {
        if (!declared.emplace(p.label.text, p.label.tok).second)
            error(p.label.tok, "duplicate identifier: path '" + p.label.text + "' already declared");
        for (const auto& e : p.elements) {
            if (e.element.kind == ElementKind::Probe && !probeIds.insert(e.element.id).second)
                error(e.tok, "duplicate identifier: probe '" + e.element.id + "'");
            if (e.element.kind == ElementKind::Marker && !markerIds.insert(e.element.id).second)
                error(e.tok, "duplicate identifier: marker '" + e.element.id + "'");
        }
    }
    auto known = [&](const Name& n) {
        if (declared.count(n.text)) return true;
        error(n.tok, "undeclared label '" + n.text + "'");
        return false;
    };

    std::set<std::string> couplerNames, produced, consumed;
    for (const auto& c : couplers_) {
        if (!couplerNames.insert(c.name.text).second)
            error(c.name.tok, "duplicate identifier: beam splitter '" + c.name.text + "'");
        std::vector<const Name*> all;
        for (const auto& in : c.inputs) all.push_back(&in);
        all.push_back(&c.outputs.first);
        all.push_back(&c.outputs.second);
        std::set<std::string> seen;
        for (const Name* n : all) {
            known(*n);
            if (!seen.insert(n->text).second) error(n->tok, "path '" + n->text + "' appears twice in one splitter");
        }
        for (const auto& in : c.inputs)
            if (!consumed.insert(in.text).second) error(in.tok, "path '" + in.text + "' already feeds a splitter");
        for (const Name* out : {&c.outputs.first, &c.outputs.second})
            if (!produced.insert(out->text).second)
                error(out->tok, "path '" + out->text + "' already produced by a splitter");
    }
    if (errors_) return std::nullopt;

    std::vector<const RawPath*> sources;
    for (const auto& p : paths_)
        if (!produced.count(p.label.text)) sources.push_back(&p);
    if (sources.empty()) {
        error(header_, "no source path: every path is produced by a splitter");
    } else if (sources.size() > 1) {
        error(sources[1]->label.tok, "more than one source path ('" + sources[0]->label.text + "' and '" +
                                         sources[1]->label.text + "'); declare how '" + sources[1]->label.text +
                                         "' is produced");
    }
    if (errors_) return std::nullopt;

    std::set<std::string> live{sources.front()->label.text};
    for (const auto& c : couplers_) {
        for (const auto& in : c.inputs) {
            if (!live.count(in.text)) error(in.tok, "path '" + in.text + "' is used before it is produced");
            live.erase(in.text);
        }
        live.insert(c.outputs.first.text);
        live.insert(c.outputs.second.text);
    }

    if (detects_.empty()) error(header_, "missing detect statement");
    for (std::size_t k = 1; k < detects_.size(); ++k) error(detects_[k].tok, "duplicate detect statement");
    if (!detects_.empty() && known(detects_[0]) && consumed.count(detects_[0].text))
        error(detects_[0].tok, "detect port '" + detects_[0].text + "' feeds a splitter");

    for (const auto& cut : cuts_)
        for (const auto& n : cut) known(n);

    std::set<std::string> expected;
    for (const auto& e : expects_) {
        if (!probeIds.count(e.site.text)) error(e.site.tok, "undeclared label: no probe site '" + e.site.text + "'");
        if (!expected.insert(e.site.text).second) error(e.site.tok, "duplicate expect for '" + e.site.text + "'");
    }
    if (errors_) return std::nullopt;

    std::vector<PathSegment> segs;
    for (const auto& p : paths_) {
        PathSegment s{p.label.text, {}};
        for (const auto& e : p.elements) s.elements.push_back(e.element);
        segs.push_back(std::move(s));
    }
    std::vector<Coupler> cps;
    for (const auto& c : couplers_) {
        Coupler cp{c.name.text, {}, {c.outputs.first.text, c.outputs.second.text}, c.ratio};
        for (const auto& in : c.inputs) cp.inputs.push_back(in.text);
        cps.push_back(std::move(cp));
    }
    std::vector<Cut> cuts;
    for (const auto& cut : cuts_) {
        Cut ct;
        for (const auto& n : cut) ct.paths.push_back(n.text);
        try {
            Circuit(ancillas_.value_or(1), segs, cps, detects_[0].text, {ct});
        } catch (const CircuitError& e) {
            error(cut.front().tok, e.what());
        }
        cuts.push_back(std::move(ct));
    }
    if (errors_) return std::nullopt;

    try {
        Circuit circuit(ancillas_.value_or(1), std::move(segs), std::move(cps), detects_[0].text, std::move(cuts));
        if (std::abs(detectAmplitude(circuit)) < kDivergenceTolerance)
            error(detects_[0].tok, "postselection amplitude at '" + detects_[0].text + "' vanishes; alpha diverges",
                  Severity::Warning);
        return circuit;
    } catch (const CircuitError& e) {
        error(header_, e.what());
        return std::nullopt;
    }
}

inline std::string formatShortest(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ec == std::errc() ? p : buf);
}

inline std::string formatFraction(std::int64_t num, std::int64_t den) {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

inline std::string formatAngle(const Angle& a) {
    if (!a.piFraction) return formatShortest(a.radians);
    auto [num, den] = *a.piFraction;
    std::string s = num < 0 ? "-" : "";
    const std::int64_t mag = num < 0 ? -num : num;
    if (mag != 1) s += std::to_string(mag);
    s += "pi";
    if (den != 1) s += "/" + std::to_string(den);
    return s;
}

inline std::string formatComplex(Complex z) {
    if (z.imag() == 0.0) return formatShortest(z.real());
    const std::string im = formatShortest(std::abs(z.imag())) + "i";
    if (z.real() == 0.0) return (z.imag() < 0 ? "-" : "") + im;
    return formatShortest(z.real()) + (z.imag() < 0 ? "-" : "+") + im;
}

inline std::string formatElement(const Element& e, const std::string& pathLabel) {
    switch (e.kind) {
        case ElementKind::Mirror: return "mirror";
        case ElementKind::Phase: return "phase " + formatAngle(e.phase);
        case ElementKind::Probe: return e.id == pathLabel ? "probe" : "probe " + e.id;
        case ElementKind::PiDevice: return "device pi";
        case ElementKind::Block: return "block";
        case ElementKind::Marker: return "marker " + e.id;
    }
    return {};
}

}  // namespace detail

/// Never throws on malformed input; problems come back as diagnostics.
inline ParseResult parse(std::string_view source) {
    return detail::Parser(source).run();
}

/// Canonical text: LF line endings, no comments, deterministic layout.
inline std::string serialize(const Scenario& s) {
    const Circuit& c = s.circuit;
    std::string out = "scenario " + s.name + "\n";
    if (c.ancillas() != 1) out += "ancillas " + std::to_string(c.ancillas()) + "\n";
    for (const auto& p : c.paths()) {
        out += "path " + p.label + " {";
        for (std::size_t i = 0; i < p.elements.size(); ++i)
            out += (i == 0 ? " " : "; ") + detail::formatElement(p.elements[i], p.label);
        out += p.elements.empty() ? "}\n" : " }\n";
    }
    for (const auto& cp : c.couplers()) {
        const auto& r = cp.ratio;
        const std::string ratio = r.fraction ? detail::formatFraction(r.fraction->first, r.fraction->second)
                                             : detail::formatShortest(r.probability);
        if (cp.inputs.size() == 1)
            out += "split " + cp.name + " " + cp.inputs[0];
        else
            out += "merge " + cp.name + " " + cp.inputs[0] + ", " + cp.inputs[1];
        out += " -> " + cp.outputs.first + ", " + cp.outputs.second + " ratio " + ratio + "\n";
    }
    out += "detect " + c.detect() + "\n";
    for (const auto& cut : c.cuts()) {
        out += "cut ";
        for (std::size_t i = 0; i < cut.paths.size(); ++i) out += (i ? ", " : "") + cut.paths[i];
        out += "\n";
    }
    for (const auto& [site, v] : s.expected) out += "expect " + site + " = " + detail::formatComplex(v) + "\n";
    return out;
}

}  // namespace whichpath
