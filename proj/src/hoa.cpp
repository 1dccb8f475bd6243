#include "osynt/hoa.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "osynt/errors.hpp"

namespace osynt {

namespace {

// ---------------------------------------------------------------- lexing

struct Token {
    enum class Kind { end, integer, ident, header, string, punct, marker };
    Kind kind = Kind::end;
    std::string text;    // ident/header/string/marker spelling
    uint64_t value = 0;  // integer payload
    char ch = 0;         // punct payload
    size_t line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_blank();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= src_.size()) {
            t.kind = Token::Kind::end;
            return t;
        }
        char c = src_[pos_];
        if (c == '-' && peek(1) == '-') {
            // --BODY--, --END--, --ABORT--
            size_t start = pos_;
            bump();
            bump();
            while (pos_ < src_.size() && src_[pos_] != '-')
                bump();
            if (peek(0) != '-' || peek(1) != '-')
                throw ParseError("unterminated section marker", t.line, t.col);
            bump();
            bump();
            t.kind = Token::Kind::marker;
            t.text = std::string(src_.substr(start, pos_ - start));
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            uint64_t v = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                v = v * 10 + static_cast<uint64_t>(src_[pos_] - '0');
                if (v > (1ull << 40))
                    throw ParseError("integer too large", t.line, t.col);
                bump();
            }
            t.kind = Token::Kind::integer;
            t.value = v;
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (pos_ < src_.size()) {
                char d = src_[pos_];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '-') {
                    id.push_back(d);
                    bump();
                } else {
                    break;
                }
            }
            if (pos_ < src_.size() && src_[pos_] == ':') {
                bump();
                t.kind = Token::Kind::header;
            } else {
                t.kind = Token::Kind::ident;
            }
            t.text = std::move(id);
            return t;
        }
        if (c == '"') {
            bump();
            std::string s;
            while (pos_ < src_.size() && src_[pos_] != '"') {
                if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) {
                    bump();
                    s.push_back(src_[pos_]);
                    bump();
                } else {
                    s.push_back(src_[pos_]);
                    bump();
                }
            }
            if (pos_ >= src_.size())
                throw ParseError("unterminated string", t.line, t.col);
            bump();  // closing quote
            t.kind = Token::Kind::string;
            t.text = std::move(s);
            return t;
        }
        static const std::string punct = "[]{}()!&|@";
        if (punct.find(c) != std::string::npos) {
            bump();
            t.kind = Token::Kind::punct;
            t.ch = c;
            return t;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.col);
    }

private:
    char peek(size_t off) const { return pos_ + off < src_.size() ? src_[pos_ + off] : '\0'; }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_blank() {
        for (;;) {
            while (pos_ < src_.size() &&
                   std::isspace(static_cast<unsigned char>(src_[pos_])))
                bump();
            if (pos_ + 1 < src_.size() && src_[pos_] == '/' && src_[pos_ + 1] == '*') {
                size_t cl = line_, cc = col_;
                bump();
                bump();
                int depth = 1;
                while (pos_ < src_.size() && depth > 0) {
                    if (src_[pos_] == '/' && peek(1) == '*') {
                        ++depth;
                        bump();
                        bump();
                    } else if (src_[pos_] == '*' && peek(1) == '/') {
                        --depth;
                        bump();
                        bump();
                    } else {
                        bump();
                    }
                }
                if (depth > 0)
                    throw ParseError("unterminated comment", cl, cc);
                continue;
            }
            break;
        }
    }

    std::string_view src_;
    size_t pos_ = 0;
    size_t line_ = 1, col_ = 1;
};

// ------------------------------------------- acceptance formula handling

struct AccNode {
    enum class T { tt, ff, inf, fin, conj, disj };
    T t = T::tt;
    uint32_t set = 0;
    std::vector<AccNode> kids;
};

std::string acc_node_string(const AccNode& n) {
    switch (n.t) {
        case AccNode::T::tt: return "t";
        case AccNode::T::ff: return "f";
        case AccNode::T::inf: return "Inf(" + std::to_string(n.set) + ")";
        case AccNode::T::fin: return "Fin(" + std::to_string(n.set) + ")";
        case AccNode::T::conj:
        case AccNode::T::disj: {
            std::string s = n.t == AccNode::T::conj ? "&" : "|";
            s.push_back('(');
            for (const AccNode& k : n.kids)
                s += acc_node_string(k) + ",";
            s.push_back(')');
            return s;
        }
    }
    return {};
}

// Flatten nested conj/disj and sort operands so structural comparison is
// insensitive to parenthesisation and operand order.
AccNode acc_canonicalize(const AccNode& n) {
    if (n.t != AccNode::T::conj && n.t != AccNode::T::disj)
        return n;
    AccNode out;
    out.t = n.t;
    for (const AccNode& k : n.kids) {
        AccNode c = acc_canonicalize(k);
        if (c.t == n.t)
            out.kids.insert(out.kids.end(), c.kids.begin(), c.kids.end());
        else
            out.kids.push_back(std::move(c));
    }
    std::sort(out.kids.begin(), out.kids.end(), [](const AccNode& a, const AccNode& b) {
        return acc_node_string(a) < acc_node_string(b);
    });
    if (out.kids.size() == 1)
        return out.kids[0];
    return out;
}

bool acc_equal(const AccNode& a, const AccNode& b) {
    return acc_node_string(acc_canonicalize(a)) == acc_node_string(acc_canonicalize(b));
}

// Canonical parity formula:  min nests outward from color 0, max from the
// top color; a color gets Inf when its parity matches the polarity.
AccNode canonical_parity(AccKind kind, AccPolarity pol, uint32_t colors) {
    auto atom = [&](uint32_t c) {
        AccNode n;
        bool even = c % 2 == 0;
        bool accepting = even == (pol == AccPolarity::even);
        n.t = accepting ? AccNode::T::inf : AccNode::T::fin;
        n.set = c;
        return n;
    };
    // Build from the innermost color outward.
    bool min = kind == AccKind::min;
    uint32_t inner = min ? colors - 1 : 0;
    AccNode cur = atom(inner);
    for (uint32_t i = 1; i < colors; ++i) {
        uint32_t c = min ? colors - 1 - i : i;
        AccNode a = atom(c);
        AccNode combined;
        combined.t = a.t == AccNode::T::inf ? AccNode::T::disj : AccNode::T::conj;
        combined.kids.push_back(std::move(a));
        combined.kids.push_back(std::move(cur));
        cur = std::move(combined);
    }
    return cur;
}

// --------------------------------------------------- label expressions

struct LabelNode {
    enum class T { tt, ff, ap, neg, conj, disj };
    T t = T::tt;
    uint32_t ap = 0;
    std::vector<LabelNode> kids;
};

Guard label_to_cubes(const LabelNode& n, bool negated) {
    switch (n.t) {
        case LabelNode::T::tt:
            return negated ? Guard{} : Guard{Cube{}};
        case LabelNode::T::ff:
            return negated ? Guard{Cube{}} : Guard{};
        case LabelNode::T::ap: {
            uint32_t bit = 1u << n.ap;
            return Guard{Cube{bit, negated ? 0u : bit}};
        }
        case LabelNode::T::neg:
            return label_to_cubes(n.kids[0], !negated);
        case LabelNode::T::conj:
        case LabelNode::T::disj: {
            bool as_or = (n.t == LabelNode::T::disj) != negated;
            if (as_or) {
                Guard out;
                for (const LabelNode& k : n.kids) {
                    Guard g = label_to_cubes(k, negated);
                    out.insert(out.end(), g.begin(), g.end());
                }
                prune_guard(out);
                return out;
            }
            Guard acc{Cube{}};
            for (const LabelNode& k : n.kids) {
                Guard g = label_to_cubes(k, negated);
                Guard next;
                for (const Cube& a : acc)
                    for (const Cube& b : g)
                        if (auto c = cube_intersection(a, b))
                            next.push_back(*c);
                prune_guard(next);
                acc = std::move(next);
                if (acc.empty())
                    break;
            }
            return acc;
        }
    }
    return {};
}

// ------------------------------------------------------------- parser

void refresh_normalized(ParityAutomaton& aut) {
    bool assigned = true;
    for (const auto& ts : aut.transitions)
        for (const Transition& t : ts)
            if (t.priority == kNoPriority)
                assigned = false;
    aut.normalized = aut.acceptance.kind == AccKind::min &&
                     aut.acceptance.polarity == AccPolarity::even && assigned &&
                     is_deterministic(aut) && is_complete(aut);
}

class HoaParser {
public:
    explicit HoaParser(std::string_view text) : lex_(text) { advance(); }

    ParityAutomaton parse() {
        parse_headers();
        resolve_acceptance();
        parse_body();
        finish();
        return std::move(aut_);
    }

private:
    void advance() { tok_ = lex_.next(); }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, tok_.line, tok_.col);
    }

    bool at_punct(char c) const { return tok_.kind == Token::Kind::punct && tok_.ch == c; }

    uint64_t expect_int(const char* what) {
        if (tok_.kind != Token::Kind::integer)
            fail(std::string("expected ") + what);
        uint64_t v = tok_.value;
        advance();
        return v;
    }

    // ---- headers

    void parse_headers() {
        if (tok_.kind != Token::Kind::header || tok_.text != "HOA")
            fail("expected HOA: v1 header");
        advance();
        if (tok_.kind != Token::Kind::ident || tok_.text != "v1")
            fail("unsupported HOA version");
        advance();

        while (tok_.kind == Token::Kind::header) {
            std::string name = tok_.text;
            size_t hline = tok_.line, hcol = tok_.col;
            advance();
            if (name == "States") {
                require_once(seen_states_, "States", hline, hcol);
                uint64_t n = expect_int("state count");
                aut_.num_states = static_cast<uint32_t>(n);
            } else if (name == "Start") {
                if (seen_start_)
                    throw ParseError("multiple Start headers (alternation unsupported)",
                                     hline, hcol);
                seen_start_ = true;
                aut_.initial = static_cast<uint32_t>(expect_int("initial state"));
                if (at_punct('&') || tok_.kind == Token::Kind::integer)
                    throw ParseError("unsupported Start header (single initial state only)",
                                     tok_.line, tok_.col);
            } else if (name == "AP") {
                require_once(seen_ap_, "AP", hline, hcol);
                uint64_t n = expect_int("AP count");
                for (uint64_t i = 0; i < n; ++i) {
                    if (tok_.kind != Token::Kind::string)
                        fail("expected AP name string");
                    aut_.aps.push_back(tok_.text);
                    advance();
                }
                if (aut_.aps.size() > 32)
                    throw ParseError("more than 32 atomic propositions are not supported",
                                     hline, hcol);
            } else if (name == "controllable-AP") {
                require_once(seen_controllable_, "controllable-AP", hline, hcol);
                while (tok_.kind == Token::Kind::integer) {
                    aut_.controllable.push_back(static_cast<uint32_t>(tok_.value));
                    advance();
                }
            } else if (name == "Acceptance") {
                require_once(seen_acceptance_, "Acceptance", hline, hcol);
                acc_sets_ = static_cast<uint32_t>(expect_int("acceptance set count"));
                acc_formula_ = parse_acc_disj();
            } else if (name == "acc-name") {
                while (tok_.kind == Token::Kind::ident || tok_.kind == Token::Kind::integer) {
                    acc_name_.push_back(tok_.kind == Token::Kind::ident
                                            ? tok_.text
                                            : std::to_string(tok_.value));
                    advance();
                }
            } else if (name == "Alias") {
                throw ParseError("aliases are not supported", hline, hcol);
            } else {
                // tool:, name:, properties:, ... -- skipped
                while (tok_.kind != Token::Kind::header && tok_.kind != Token::Kind::marker &&
                       tok_.kind != Token::Kind::end)
                    advance();
            }
        }

        if (tok_.kind != Token::Kind::marker || tok_.text != "--BODY--")
            fail("expected --BODY--");
        advance();

        if (!seen_states_)
            fail("missing States header");
        if (!seen_start_)
            fail("missing Start header");
        if (!seen_acceptance_)
            fail("missing Acceptance header");
        if (aut_.num_states == 0)
            fail("automaton must have at least one state");
        if (aut_.initial >= aut_.num_states)
            fail("initial state out of range");

        std::sort(aut_.controllable.begin(), aut_.controllable.end());
        aut_.controllable.erase(
            std::unique(aut_.controllable.begin(), aut_.controllable.end()),
            aut_.controllable.end());
        for (uint32_t ap : aut_.controllable)
            if (ap >= aut_.aps.size())
                fail("controllable-AP index " + std::to_string(ap) + " out of range");

        aut_.transitions.assign(aut_.num_states, {});
    }

    void require_once(bool& flag, const char* what, size_t line, size_t col) {
        if (flag)
            throw ParseError(std::string("duplicate ") + what + " header", line, col);
        flag = true;
    }

    AccNode parse_acc_disj() {
        AccNode n = parse_acc_conj();
        while (at_punct('|')) {
            advance();
            AccNode rhs = parse_acc_conj();
            AccNode d;
            d.t = AccNode::T::disj;
            d.kids.push_back(std::move(n));
            d.kids.push_back(std::move(rhs));
            n = std::move(d);
        }
        return n;
    }

    AccNode parse_acc_conj() {
        AccNode n = parse_acc_atom();
        while (at_punct('&')) {
            advance();
            AccNode rhs = parse_acc_atom();
            AccNode c;
            c.t = AccNode::T::conj;
            c.kids.push_back(std::move(n));
            c.kids.push_back(std::move(rhs));
            n = std::move(c);
        }
        return n;
    }

    AccNode parse_acc_atom() {
        if (at_punct('(')) {
            advance();
            AccNode n = parse_acc_disj();
            if (!at_punct(')'))
                fail("expected ')' in acceptance formula");
            advance();
            return n;
        }
        if (tok_.kind == Token::Kind::ident &&
            (tok_.text == "Inf" || tok_.text == "Fin")) {
            AccNode n;
            n.t = tok_.text == "Inf" ? AccNode::T::inf : AccNode::T::fin;
            advance();
            if (!at_punct('('))
                fail("expected '(' after Inf/Fin");
            advance();
            if (at_punct('!'))
                throw UnsupportedAcceptanceError("negated acceptance sets are not supported",
                                                 tok_.line, tok_.col);
            n.set = static_cast<uint32_t>(expect_int("acceptance set index"));
            if (!at_punct(')'))
                fail("expected ')' after acceptance set index");
            advance();
            return n;
        }
        if (tok_.kind == Token::Kind::ident && tok_.text == "t") {
            advance();
            return AccNode{AccNode::T::tt, 0, {}};
        }
        if (tok_.kind == Token::Kind::ident && tok_.text == "f") {
            advance();
            return AccNode{AccNode::T::ff, 0, {}};
        }
        fail("malformed acceptance formula");
    }

    // Decide the parity descriptor from acc-name when present, else by
    // matching the Acceptance formula against the canonical parity shapes.
    void resolve_acceptance() {
        if (!acc_name_.empty()) {
            const std::string& n = acc_name_[0];
            if (n == "Buchi") {
                set_descriptor(AccKind::min, AccPolarity::even, 1, 1);
            } else if (n == "co-Buchi") {
                set_descriptor(AccKind::min, AccPolarity::odd, 1, 1);
            } else if (n == "all") {
                stamp_override_ = 0;
                aut_.acceptance = {AccKind::min, AccPolarity::even, 1};
            } else if (n == "none") {
                stamp_override_ = 1;
                aut_.acceptance = {AccKind::min, AccPolarity::even, 2};
            } else if (n == "parity" && acc_name_.size() == 4) {
                AccKind kind;
                if (acc_name_[1] == "min")
                    kind = AccKind::min;
                else if (acc_name_[1] == "max")
                    kind = AccKind::max;
                else
                    throw UnsupportedAcceptanceError("unsupported acc-name: " + join_name());
                AccPolarity pol;
                if (acc_name_[2] == "even")
                    pol = AccPolarity::even;
                else if (acc_name_[2] == "odd")
                    pol = AccPolarity::odd;
                else
                    throw UnsupportedAcceptanceError("unsupported acc-name: " + join_name());
                uint32_t d = static_cast<uint32_t>(std::stoul(acc_name_[3]));
                if (d == 0)
                    throw UnsupportedAcceptanceError("parity with zero colors is not supported");
                set_descriptor(kind, pol, d, d);
            } else {
                throw UnsupportedAcceptanceError("unsupported acceptance: " + join_name());
            }
            return;
        }

        // No acc-name: recognize the formula shape.
        if (acc_formula_.t == AccNode::T::tt) {
            stamp_override_ = 0;
            aut_.acceptance = {AccKind::min, AccPolarity::even, 1};
            return;
        }
        if (acc_formula_.t == AccNode::T::ff) {
            stamp_override_ = 1;
            aut_.acceptance = {AccKind::min, AccPolarity::even, 2};
            return;
        }
        if (acc_sets_ > 0) {
            for (AccKind kind : {AccKind::min, AccKind::max}) {
                for (AccPolarity pol : {AccPolarity::even, AccPolarity::odd}) {
                    if (acc_equal(acc_formula_, canonical_parity(kind, pol, acc_sets_))) {
                        aut_.acceptance = {kind, pol, acc_sets_};
                        return;
                    }
                }
            }
        }
        throw UnsupportedAcceptanceError(
            "unsupported acceptance (not Buchi, co-Buchi, or parity-shaped)");
    }

    void set_descriptor(AccKind kind, AccPolarity pol, uint32_t colors, uint32_t declared) {
        if (acc_sets_ != declared)
            throw ParseError("acc-name is inconsistent with the Acceptance header");
        aut_.acceptance = {kind, pol, colors};
    }

    std::string join_name() const {
        std::string s;
        for (const std::string& p : acc_name_) {
            if (!s.empty())
                s.push_back(' ');
            s += p;
        }
        return s;
    }

    // ---- body

    void parse_body() {
        std::vector<char> declared(aut_.num_states, 0);
        while (!(tok_.kind == Token::Kind::marker && tok_.text == "--END--")) {
            if (tok_.kind == Token::Kind::end)
                fail("missing --END--");
            if (tok_.kind != Token::Kind::header || tok_.text != "State")
                fail("expected State: declaration");
            advance();
            if (at_punct('['))
                fail("state labels are not supported");
            uint32_t state = static_cast<uint32_t>(expect_int("state index"));
            if (state >= aut_.num_states)
                fail("state index out of range");
            if (declared[state])
                fail("state " + std::to_string(state) + " declared twice");
            declared[state] = 1;
            if (tok_.kind == Token::Kind::string)
                advance();  // state name, ignored
            int state_priority = kNoPriority;
            if (at_punct('{'))
                state_priority = parse_marks();

            while (at_punct('[')) {
                Transition tr;
                advance();
                LabelNode expr = parse_label_disj();
                if (!at_punct(']'))
                    fail("expected ']' after guard");
                advance();
                tr.guard = label_to_cubes(expr, false);
                prune_guard(tr.guard);
                tr.target = static_cast<uint32_t>(expect_int("transition target"));
                if (tr.target >= aut_.num_states)
                    fail("transition target out of range");
                int pri = kNoPriority;
                if (at_punct('{'))
                    pri = parse_marks();
                // State marks stamp every outgoing transition.
                tr.priority = combine_marks(pri, state_priority);
                if (stamp_override_)
                    tr.priority = *stamp_override_;
                aut_.transitions[state].push_back(std::move(tr));
            }
            if (tok_.kind == Token::Kind::integer)
                fail("implicit transition labels are not supported");
        }
        advance();  // --END--
        if (tok_.kind != Token::Kind::end)
            fail("trailing input after --END--");
    }

    // {i j ...} reduced to one priority: min (resp. max) of the listed sets
    // matching the descriptor kind; an empty mark list yields kNoPriority.
    int parse_marks() {
        advance();  // '{'
        int acc = kNoPriority;
        while (tok_.kind == Token::Kind::integer) {
            uint32_t m = static_cast<uint32_t>(tok_.value);
            if (m >= acc_sets_)
                fail("acceptance set " + std::to_string(m) + " out of range");
            advance();
            acc = combine_marks(acc, static_cast<int>(m));
        }
        if (!at_punct('}'))
            fail("expected '}' after acceptance marks");
        advance();
        return acc;
    }

    int combine_marks(int a, int b) const {
        if (a == kNoPriority)
            return b;
        if (b == kNoPriority)
            return a;
        return aut_.acceptance.kind == AccKind::min ? std::min(a, b) : std::max(a, b);
    }

    LabelNode parse_label_disj() {
        LabelNode n = parse_label_conj();
        while (at_punct('|')) {
            advance();
            LabelNode rhs = parse_label_conj();
            LabelNode d;
            d.t = LabelNode::T::disj;
            d.kids.push_back(std::move(n));
            d.kids.push_back(std::move(rhs));
            n = std::move(d);
        }
        return n;
    }

    LabelNode parse_label_conj() {
        LabelNode n = parse_label_atom();
        while (at_punct('&')) {
            advance();
            LabelNode rhs = parse_label_atom();
            LabelNode c;
            c.t = LabelNode::T::conj;
            c.kids.push_back(std::move(n));
            c.kids.push_back(std::move(rhs));
            n = std::move(c);
        }
        return n;
    }

    LabelNode parse_label_atom() {
        if (at_punct('!')) {
            advance();
            LabelNode n;
            n.t = LabelNode::T::neg;
            n.kids.push_back(parse_label_atom());
            return n;
        }
        if (at_punct('(')) {
            advance();
            LabelNode n = parse_label_disj();
            if (!at_punct(')'))
                fail("expected ')' in guard");
            advance();
            return n;
        }
        if (at_punct('@'))
            fail("aliases are not supported");
        if (tok_.kind == Token::Kind::integer) {
            if (tok_.value >= aut_.aps.size())
                fail("undeclared AP index " + std::to_string(tok_.value));
            LabelNode n;
            n.t = LabelNode::T::ap;
            n.ap = static_cast<uint32_t>(tok_.value);
            advance();
            return n;
        }
        if (tok_.kind == Token::Kind::ident && tok_.text == "t") {
            advance();
            return LabelNode{LabelNode::T::tt, 0, {}};
        }
        if (tok_.kind == Token::Kind::ident && tok_.text == "f") {
            advance();
            return LabelNode{LabelNode::T::ff, 0, {}};
        }
        fail("malformed guard expression");
    }

    void finish() { refresh_normalized(aut_); }

    Lexer lex_;
    Token tok_;
    ParityAutomaton aut_;
    bool seen_states_ = false, seen_start_ = false, seen_ap_ = false;
    bool seen_controllable_ = false, seen_acceptance_ = false;
    uint32_t acc_sets_ = 0;
    AccNode acc_formula_;
    std::vector<std::string> acc_name_;
    std::optional<int> stamp_override_;  // "all" / "none" canonical priority
};

std::string cube_string(const Cube& c) {
    if (c.mask == 0)
        return "t";
    std::string s;
    for (uint32_t v = 0; v < 32; ++v) {
        uint32_t bit = 1u << v;
        if (!(c.mask & bit))
            continue;
        if (!s.empty())
            s += "&";
        if (!(c.bits & bit))
            s += "!";
        s += std::to_string(v);
    }
    return s;
}

std::string guard_string(const Guard& g) {
    if (g.empty())
        return "f";
    std::string s;
    for (const Cube& c : g) {
        if (!s.empty())
            s += " | ";
        s += cube_string(c);
    }
    return s;
}

}  // namespace

std::vector<uint32_t> ParityAutomaton::uncontrollable() const {
    std::vector<uint32_t> out;
    for (uint32_t i = 0; i < aps.size(); ++i)
        if (!is_controllable(i))
            out.push_back(i);
    return out;
}

bool ParityAutomaton::is_controllable(uint32_t ap) const {
    return std::binary_search(controllable.begin(), controllable.end(), ap);
}

ParityAutomaton parse_ehoa(std::string_view text) {
    return HoaParser(text).parse();
}

bool is_deterministic(const ParityAutomaton& aut) {
    for (const auto& ts : aut.transitions)
        for (size_t i = 0; i < ts.size(); ++i)
            for (size_t j = i + 1; j < ts.size(); ++j)
                for (const Cube& a : ts[i].guard)
                    for (const Cube& b : ts[j].guard)
                        if (a.intersects(b))
                            return false;
    return true;
}

bool is_complete(const ParityAutomaton& aut) {
    for (const auto& ts : aut.transitions) {
        Guard covered;
        for (const Transition& t : ts)
            covered.insert(covered.end(), t.guard.begin(), t.guard.end());
        if (!coverage_residual(covered).empty())
            return false;
    }
    return true;
}

const Transition* matching_transition(const ParityAutomaton& aut, uint32_t state,
                                      uint32_t valuation) {
    for (const Transition& t : aut.transitions[state])
        if (guard_matches(t.guard, valuation))
            return &t;
    return nullptr;
}

std::string acceptance_formula(const Acceptance& acc) {
    struct Printer {
        static std::string print(const AccNode& n, bool parens) {
            switch (n.t) {
                case AccNode::T::tt: return "t";
                case AccNode::T::ff: return "f";
                case AccNode::T::inf: return "Inf(" + std::to_string(n.set) + ")";
                case AccNode::T::fin: return "Fin(" + std::to_string(n.set) + ")";
                default: {
                    const char* op = n.t == AccNode::T::conj ? " & " : " | ";
                    std::string s = print(n.kids[0], true) + op + print(n.kids[1], true);
                    return parens ? "(" + s + ")" : s;
                }
            }
        }
    };
    return Printer::print(canonical_parity(acc.kind, acc.polarity, acc.colors), false);
}

std::string print_ehoa(const ParityAutomaton& aut) {
    std::ostringstream os;
    os << "HOA: v1\n";
    os << "States: " << aut.num_states << "\n";
    os << "Start: " << aut.initial << "\n";
    os << "AP: " << aut.aps.size();
    for (const std::string& ap : aut.aps) {
        std::string escaped;
        for (char c : ap) {
            if (c == '"' || c == '\\')
                escaped.push_back('\\');
            escaped.push_back(c);
        }
        os << " \"" << escaped << "\"";
    }
    os << "\n";
    os << "controllable-AP:";
    for (uint32_t ap : aut.controllable)
        os << " " << ap;
    os << "\n";
    os << "acc-name: parity " << (aut.acceptance.kind == AccKind::min ? "min" : "max") << " "
       << (aut.acceptance.polarity == AccPolarity::even ? "even" : "odd") << " "
       << aut.acceptance.colors << "\n";
    os << "Acceptance: " << aut.acceptance.colors << " " << acceptance_formula(aut.acceptance)
       << "\n";
    os << "--BODY--\n";
    for (uint32_t q = 0; q < aut.num_states; ++q) {
        os << "State: " << q << "\n";
        for (const Transition& t : aut.transitions[q]) {
            os << "[" << guard_string(t.guard) << "] " << t.target;
            if (t.priority != kNoPriority)
                os << " {" << t.priority << "}";
            os << "\n";
        }
    }
    os << "--END--\n";
    return os.str();
}

ParityAutomaton complete(const ParityAutomaton& in) {
    if (!is_deterministic(in))
        throw Error("nondeterministic input: overlapping guards");
    std::vector<Guard> residuals(in.num_states);
    bool any = false;
    for (uint32_t q = 0; q < in.num_states; ++q) {
        Guard covered;
        for (const Transition& t : in.transitions[q])
            covered.insert(covered.end(), t.guard.begin(), t.guard.end());
        residuals[q] = coverage_residual(covered);
        any = any || !residuals[q].empty();
    }
    ParityAutomaton out = in;
    if (!any) {
        refresh_normalized(out);
        return out;
    }
    // Rejecting self-loop parity under the current descriptor.
    int sink_pri = out.acceptance.polarity == AccPolarity::even ? 1 : 0;
    uint32_t sink = out.num_states;
    out.num_states += 1;
    out.transitions.emplace_back();
    for (uint32_t q = 0; q < in.num_states; ++q) {
        if (residuals[q].empty())
            continue;
        Transition t;
        t.guard = std::move(residuals[q]);
        t.target = sink;
        t.priority = sink_pri;
        out.transitions[q].push_back(std::move(t));
    }
    Transition loop;
    loop.guard = {Cube{}};
    loop.target = sink;
    loop.priority = sink_pri;
    out.transitions[sink].push_back(std::move(loop));
    out.acceptance.colors = std::max(out.acceptance.colors, static_cast<uint32_t>(sink_pri) + 1);
    refresh_normalized(out);
    return out;
}

ParityAutomaton normalize_acceptance(const ParityAutomaton& in) {
    if (in.normalized)
        return in;
    ParityAutomaton out = in;
    // Neutral (colorless) transitions contribute an empty set of recurring
    // colors. The acceptance formula walks min-kind chains from color 0 and
    // max-kind chains from the top color, so with no color present the
    // innermost atom decides: color d-1 for min, color 0 for max, accepting
    // exactly when that color's parity disagrees with the polarity.
    bool neutral_accepts;
    if (out.acceptance.kind == AccKind::min) {
        bool top_even = (out.acceptance.colors - 1) % 2 == 0;
        neutral_accepts = top_even == (out.acceptance.polarity == AccPolarity::odd);
    } else {
        neutral_accepts = out.acceptance.polarity == AccPolarity::odd;
    }
    bool changed = false;

    if (out.acceptance.polarity == AccPolarity::odd) {
        for (auto& ts : out.transitions)
            for (Transition& t : ts)
                if (t.priority != kNoPriority)
                    t.priority += 1;
        out.acceptance.polarity = AccPolarity::even;
        out.acceptance.colors += 1;
        changed = true;
    }
    if (out.acceptance.kind == AccKind::max) {
        // Map p -> C - p with C the smallest even number covering the top
        // color; flips min/max while preserving each color's parity.
        uint32_t top = out.acceptance.colors - 1;
        uint32_t c = top % 2 == 0 ? top : top + 1;
        for (auto& ts : out.transitions)
            for (Transition& t : ts)
                if (t.priority != kNoPriority)
                    t.priority = static_cast<int>(c) - t.priority;
        out.acceptance.kind = AccKind::min;
        out.acceptance.colors = c + 1;
        changed = true;
    }

    int max_assigned = -1;
    bool has_neutral = false;
    for (const auto& ts : out.transitions)
        for (const Transition& t : ts) {
            if (t.priority == kNoPriority)
                has_neutral = true;
            else
                max_assigned = std::max(max_assigned, t.priority);
        }
    if (has_neutral) {
        // Weakest priority: at least every assigned one, with the parity the
        // empty recurring-color set had under the original condition.
        int base = std::max(max_assigned, 0);
        bool base_even = base % 2 == 0;
        int neutral = base_even == neutral_accepts ? base : base + 1;
        for (auto& ts : out.transitions)
            for (Transition& t : ts)
                if (t.priority == kNoPriority)
                    t.priority = neutral;
        changed = true;
    }
    if (changed) {
        int top = -1;
        for (const auto& ts : out.transitions)
            for (const Transition& t : ts)
                top = std::max(top, t.priority);
        out.acceptance.colors = static_cast<uint32_t>(std::max(top + 1, 1));
    }
    out = complete(out);
    return out;
}

}  // namespace osynt
