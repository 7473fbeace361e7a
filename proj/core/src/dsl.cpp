#include "bistab/dsl.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace bistab {

namespace {

struct Cursor {
    const std::string& s;
    int line;
    std::size_t pos = 0;

    int col() const { return static_cast<int>(pos) + 1; }
    bool done() const { return pos >= s.size(); }
    char peek() const { return done() ? '\0' : s[pos]; }
    void skip_ws() {
        while (!done() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line, col(), msg); }
};

// One side of a reaction: counts of A and B.
struct Side {
    int a = 0;
    int b = 0;
};

Side parse_side(Cursor& c) {
    Side side;
    bool first = true;
    while (true) {
        c.skip_ws();
        if (!first) {
            if (c.peek() != '+') break;
            ++c.pos;
            c.skip_ws();
        }
        int count = 1;
        if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
            count = 0;
            while (std::isdigit(static_cast<unsigned char>(c.peek()))) {
                count = count * 10 + (c.peek() - '0');
                if (count > 1000) c.fail("stoichiometric count too large");
                ++c.pos;
            }
            c.skip_ws();
        }
        const char sp = c.peek();
        if (sp == 'A')
            side.a += count;
        else if (sp == 'B')
            side.b += count;
        else if (first && count == 0 && sp != 'A' && sp != 'B')
            c.fail("expected a species term like '2A' or 'B'");
        else
            c.fail("expected species 'A' or 'B'");
        ++c.pos;
        first = false;
        c.skip_ws();
        if (c.peek() != '+') break;
    }
    return side;
}

double parse_kappa(Cursor& c, std::optional<Rat64>& exact) {
    c.skip_ws();
    const std::size_t start = c.pos;
    while (!c.done() && !std::isspace(static_cast<unsigned char>(c.peek())) && c.peek() != '#')
        ++c.pos;
    const std::string tok = c.s.substr(start, c.pos - start);
    if (tok.empty()) c.fail("expected a rate constant after '@'");
    exact = Rat64::parse(tok);
    if (exact) return exact->value();
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') {
        c.pos = start;
        c.fail("cannot parse rate constant '" + tok + "'");
    }
    return v;
}

}  // namespace

ParsedNetwork parse_network(const std::string& text) {
    std::vector<Reaction> reactions;
    std::vector<std::string> warnings;

    int line_no = 0;
    std::size_t at = 0;
    while (at <= text.size()) {
        const std::size_t nl = text.find('\n', at);
        std::string line =
            nl == std::string::npos ? text.substr(at) : text.substr(at, nl - at);
        at = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        Cursor c{line, line_no};
        c.skip_ws();
        if (c.done()) continue;

        const Side lhs = parse_side(c);
        c.skip_ws();
        if (c.peek() != '-' || c.pos + 1 >= line.size() || line[c.pos + 1] != '>')
            c.fail("expected '->' between reactant and product sides");
        c.pos += 2;
        const Side rhs = parse_side(c);
        c.skip_ws();
        if (c.peek() != '@') c.fail("expected '@' before the rate constant");
        ++c.pos;
        std::optional<Rat64> exact;
        const double kappa = parse_kappa(c, exact);

        c.skip_ws();
        std::optional<double> scale;
        if (!c.done()) {
            if (c.s.compare(c.pos, 6, "scale=") == 0) {
                c.pos += 6;
                const std::size_t start = c.pos;
                while (!c.done() && !std::isspace(static_cast<unsigned char>(c.peek())))
                    ++c.pos;
                const std::string tok = c.s.substr(start, c.pos - start);
                char* end = nullptr;
                const double v = std::strtod(tok.c_str(), &end);
                if (tok.empty() || end == tok.c_str() || *end != '\0')
                    c.fail("cannot parse scale exponent '" + tok + "'");
                scale = v;
                c.skip_ws();
            }
            if (!c.done()) c.fail("unexpected trailing text");
        }

        if (lhs.a + lhs.b == 0) c.fail("reaction needs at least one reactant");
        if (lhs.a + lhs.b != rhs.a + rhs.b)
            c.fail("total copy number must be conserved: a'+b' must equal a+b "
                   "(reactions have the form aA + bB -> (a+z)A + (b-z)B)");
        const int zeta = rhs.a - lhs.a;
        if (zeta == 0) c.fail("no net change: product side equals reactant side");
        if (!(kappa > 0.0)) c.fail("rate constant must be positive");

        Reaction r;
        r.a = lhs.a;
        r.b = lhs.b;
        r.zeta = zeta;
        r.kappa = kappa;
        r.kappa_exact = exact;
        r.scale = scale ? *scale : r.standard_scale();

        bool merged = false;
        for (auto& prev : reactions) {
            if (prev.a == r.a && prev.b == r.b && prev.zeta == r.zeta &&
                prev.scale == r.scale) {
                prev.kappa += r.kappa;
                if (prev.kappa_exact && r.kappa_exact) {
                    prev.kappa_exact = *prev.kappa_exact + *r.kappa_exact;
                    prev.kappa = prev.kappa_exact->value();
                } else {
                    prev.kappa_exact.reset();
                }
                warnings.push_back("line " + std::to_string(line_no) +
                                   ": duplicate reaction merged (rates summed)");
                merged = true;
                break;
            }
        }
        if (!merged) reactions.push_back(r);
    }

    if (reactions.empty()) throw ParseError(line_no, 1, "no reactions found");
    try {
        return ParsedNetwork{ReactionNetwork(std::move(reactions)), std::move(warnings)};
    } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, 1, e.what());
    }
}

namespace {

void print_side(std::string& out, int a, int b) {
    bool first = true;
    auto term = [&](int count, char sp) {
        if (count == 0) return;
        if (!first) out += " + ";
        if (count != 1) out += std::to_string(count);
        out += sp;
        first = false;
    };
    term(a, 'A');
    term(b, 'B');
    if (first) out += "0";  // unreachable for valid reactions; kept for safety
}

std::string format_number(double v, const std::optional<Rat64>& exact) {
    if (exact) return exact->str();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string pretty_print(const ReactionNetwork& net) {
    std::string out;
    for (const auto& r : net.reactions()) {
        print_side(out, r.a, r.b);
        out += " -> ";
        print_side(out, r.a + r.zeta, r.b - r.zeta);
        out += " @ ";
        out += format_number(r.kappa, r.kappa_exact);
        if (!r.has_standard_scale()) {
            out += " scale=";
            out += format_number(r.scale, std::nullopt);
        }
        out += "\n";
    }
    return out;
}

}  // namespace bistab
