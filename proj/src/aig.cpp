#include "osynt/aig.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "osynt/errors.hpp"

namespace osynt {

namespace {

constexpr uint32_t kVarLimit = 1u << 24;

struct LineReader {
    std::string_view src;
    size_t pos = 0;
    size_t line = 0;

    bool next(std::string& out) {
        if (pos >= src.size())
            return false;
        size_t end = src.find('\n', pos);
        if (end == std::string_view::npos)
            end = src.size();
        out.assign(src.substr(pos, end - pos));
        if (!out.empty() && out.back() == '\r')
            out.pop_back();
        pos = end + 1;
        ++line;
        return true;
    }
};

std::vector<uint32_t> parse_uints(const std::string& s, size_t line, size_t expect) {
    std::vector<uint32_t> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ')
            ++i;
        if (i >= s.size())
            break;
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw ParseError("expected unsigned integer", line, i + 1);
        uint64_t v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            v = v * 10 + static_cast<uint64_t>(s[i] - '0');
            if (v > 2ull * kVarLimit + 1)
                throw ParseError("literal too large", line, i + 1);
            ++i;
        }
        out.push_back(static_cast<uint32_t>(v));
    }
    if (expect != 0 && out.size() != expect)
        throw ParseError("expected " + std::to_string(expect) + " integers", line);
    return out;
}

}  // namespace

AigCircuit parse_aag(std::string_view text) {
    LineReader rd{text};
    std::string ln;
    if (!rd.next(ln))
        throw ParseError("empty file");
    std::istringstream hdr(ln);
    std::string magic;
    hdr >> magic;
    if (magic == "aig")
        throw ParseError("binary AIGER input is not supported; convert to ASCII \"aag\"", 1);
    if (magic != "aag")
        throw ParseError("expected \"aag\" header", 1);
    uint64_t m = 0, i = 0, l = 0, o = 0, a = 0;
    if (!(hdr >> m >> i >> l >> o >> a))
        throw ParseError("malformed aag header", 1);
    std::string rest;
    if (hdr >> rest)
        throw ParseError("extended aag headers (B/C/J/F) are not supported", 1);
    if (m > kVarLimit)
        throw ParseError("variable count exceeds limit", 1);
    if (i + l + a > m)
        throw ParseError("header counts exceed declared maximum variable index", 1);

    AigCircuit c;
    c.max_var = static_cast<uint32_t>(m);
    auto check_lit = [&](uint32_t lit, size_t line) {
        if (lit / 2 > c.max_var)
            throw ParseError("literal " + std::to_string(lit) + " out of range", line);
    };

    // 0 = undefined, 1 = input, 2 = latch, 3 = and
    std::vector<uint8_t> def(m + 1, 0);
    auto define = [&](uint32_t lit, uint8_t kind, size_t line) {
        if (lit % 2 != 0)
            throw ParseError("defined literal must be even", line);
        if (lit == 0)
            throw ParseError("literal 0 cannot be defined", line);
        check_lit(lit, line);
        if (def[lit / 2] != 0)
            throw ParseError("literal " + std::to_string(lit) + " defined twice", line);
        def[lit / 2] = kind;
    };

    for (uint64_t k = 0; k < i; ++k) {
        if (!rd.next(ln))
            throw ParseError("unexpected end of file in input section", rd.line);
        auto v = parse_uints(ln, rd.line, 1);
        define(v[0], 1, rd.line);
        c.inputs.push_back(v[0]);
    }
    for (uint64_t k = 0; k < l; ++k) {
        if (!rd.next(ln))
            throw ParseError("unexpected end of file in latch section", rd.line);
        auto v = parse_uints(ln, rd.line, 2);
        define(v[0], 2, rd.line);
        check_lit(v[1], rd.line);
        c.latches.push_back({v[0], v[1]});
    }
    for (uint64_t k = 0; k < o; ++k) {
        if (!rd.next(ln))
            throw ParseError("unexpected end of file in output section", rd.line);
        auto v = parse_uints(ln, rd.line, 1);
        check_lit(v[0], rd.line);
        c.outputs.push_back(v[0]);
    }
    for (uint64_t k = 0; k < a; ++k) {
        if (!rd.next(ln))
            throw ParseError("unexpected end of file in gate section", rd.line);
        auto v = parse_uints(ln, rd.line, 3);
        define(v[0], 3, rd.line);
        check_lit(v[1], rd.line);
        check_lit(v[2], rd.line);
        c.ands.push_back({v[0], v[1], v[2]});
    }

    // Every used variable must be defined somewhere.
    auto check_defined = [&](uint32_t lit, const char* where) {
        if (lit / 2 != 0 && def[lit / 2] == 0)
            throw ParseError("literal " + std::to_string(lit) + " used in " + where +
                             " but never defined");
    };
    for (const auto& la : c.latches)
        check_defined(la.next, "latch");
    for (uint32_t out : c.outputs)
        check_defined(out, "output");
    for (const auto& g : c.ands) {
        check_defined(g.rhs0, "gate");
        check_defined(g.rhs1, "gate");
    }

    // Topologically order the gates; a cycle means the combinational logic
    // is ill-formed.
    {
        std::map<uint32_t, size_t> gate_of;  // defining var -> index in ands
        for (size_t k = 0; k < c.ands.size(); ++k)
            gate_of[c.ands[k].lhs / 2] = k;
        std::vector<uint8_t> state(c.ands.size(), 0);  // 0 new, 1 open, 2 done
        std::vector<AigCircuit::AndGate> ordered;
        ordered.reserve(c.ands.size());
        // Iterative DFS.
        for (size_t root = 0; root < c.ands.size(); ++root) {
            if (state[root] == 2)
                continue;
            std::vector<std::pair<size_t, int>> stack{{root, 0}};
            while (!stack.empty()) {
                auto& [g, phase] = stack.back();
                if (state[g] == 2) {
                    stack.pop_back();
                    continue;
                }
                if (phase == 0) {
                    state[g] = 1;
                }
                bool descended = false;
                while (phase < 2) {
                    uint32_t operand = phase == 0 ? c.ands[g].rhs0 : c.ands[g].rhs1;
                    ++phase;
                    auto it = gate_of.find(operand / 2);
                    if (it == gate_of.end())
                        continue;
                    if (state[it->second] == 1)
                        throw ParseError("combinational cycle through literal " +
                                         std::to_string(c.ands[g].lhs));
                    if (state[it->second] == 0) {
                        stack.emplace_back(it->second, 0);
                        descended = true;
                        break;
                    }
                }
                if (descended)
                    continue;
                state[g] = 2;
                ordered.push_back(c.ands[g]);
                stack.pop_back();
            }
        }
        c.ands = std::move(ordered);
    }

    // Symbol and comment sections.
    c.input_names.assign(c.inputs.size(), "");
    c.latch_names.assign(c.latches.size(), "");
    c.output_names.assign(c.outputs.size(), "");
    while (rd.next(ln)) {
        if (ln.empty())
            continue;
        if (ln[0] == 'c')
            break;  // comment section runs to EOF
        char kind = ln[0];
        size_t sp = ln.find(' ');
        if ((kind != 'i' && kind != 'l' && kind != 'o') || sp == std::string::npos ||
            sp < 2)
            throw ParseError("malformed symbol line", rd.line);
        uint64_t idx = 0;
        for (size_t p = 1; p < sp; ++p) {
            if (!std::isdigit(static_cast<unsigned char>(ln[p])))
                throw ParseError("malformed symbol index", rd.line);
            idx = idx * 10 + static_cast<uint64_t>(ln[p] - '0');
        }
        std::string name = ln.substr(sp + 1);
        auto assign = [&](std::vector<std::string>& names) {
            if (idx >= names.size())
                throw ParseError("symbol index out of range", rd.line);
            names[idx] = name;
        };
        if (kind == 'i')
            assign(c.input_names);
        else if (kind == 'l')
            assign(c.latch_names);
        else
            assign(c.output_names);
    }
    return c;
}

std::string print_aag(const AigCircuit& c) {
    std::ostringstream os;
    os << "aag " << c.max_var << " " << c.inputs.size() << " " << c.latches.size() << " "
       << c.outputs.size() << " " << c.ands.size() << "\n";
    for (uint32_t in : c.inputs)
        os << in << "\n";
    for (const auto& la : c.latches)
        os << la.lit << " " << la.next << "\n";
    for (uint32_t out : c.outputs)
        os << out << "\n";
    for (const auto& g : c.ands)
        os << g.lhs << " " << g.rhs0 << " " << g.rhs1 << "\n";
    for (size_t k = 0; k < c.input_names.size(); ++k)
        if (!c.input_names[k].empty())
            os << "i" << k << " " << c.input_names[k] << "\n";
    for (size_t k = 0; k < c.latch_names.size(); ++k)
        if (!c.latch_names[k].empty())
            os << "l" << k << " " << c.latch_names[k] << "\n";
    for (size_t k = 0; k < c.output_names.size(); ++k)
        if (!c.output_names[k].empty())
            os << "o" << k << " " << c.output_names[k] << "\n";
    return os.str();
}

StepResult simulate(const AigCircuit& c, uint64_t latches, uint64_t inputs) {
    if (c.inputs.size() > 64 || c.latches.size() > 64 || c.outputs.size() > 64)
        throw CapExceededError("simulate supports at most 64 inputs/latches/outputs");
    std::vector<uint8_t> val(c.max_var + 1, 0);
    auto lit_val = [&](uint32_t lit) -> uint8_t {
        uint8_t v = val[lit / 2];
        return lit % 2 ? !v : v;
    };
    // Constant literal 0/1 lives at variable 0.
    val[0] = 0;
    for (size_t k = 0; k < c.inputs.size(); ++k)
        val[c.inputs[k] / 2] = (inputs >> k) & 1;
    for (size_t k = 0; k < c.latches.size(); ++k)
        val[c.latches[k].lit / 2] = (latches >> k) & 1;
    for (const auto& g : c.ands)
        val[g.lhs / 2] = lit_val(g.rhs0) & lit_val(g.rhs1);
    StepResult r;
    for (size_t k = 0; k < c.outputs.size(); ++k)
        r.outputs |= static_cast<uint64_t>(lit_val(c.outputs[k])) << k;
    for (size_t k = 0; k < c.latches.size(); ++k)
        r.next_latches |= static_cast<uint64_t>(lit_val(c.latches[k].next)) << k;
    return r;
}

StepResult simulate(const AigCircuit& c, const std::vector<bool>& latches,
                    const std::vector<bool>& inputs) {
    if (latches.size() != c.latches.size())
        throw Error("latch vector length mismatch: got " + std::to_string(latches.size()) +
                    ", circuit has " + std::to_string(c.latches.size()));
    if (inputs.size() != c.inputs.size())
        throw Error("input vector length mismatch: got " + std::to_string(inputs.size()) +
                    ", circuit has " + std::to_string(c.inputs.size()));
    uint64_t lbits = 0, ibits = 0;
    for (size_t k = 0; k < latches.size(); ++k)
        lbits |= static_cast<uint64_t>(latches[k]) << k;
    for (size_t k = 0; k < inputs.size(); ++k)
        ibits |= static_cast<uint64_t>(inputs[k]) << k;
    return simulate(c, lbits, ibits);
}

SafetySpec classify_safety_spec(const AigCircuit& c) {
    if (c.outputs.size() != 1)
        throw Error("safety specification must have exactly one output, got " +
                    std::to_string(c.outputs.size()));
    SafetySpec spec;
    spec.circuit = c;
    static const std::string prefix = "controllable_";
    for (uint32_t k = 0; k < c.inputs.size(); ++k) {
        const std::string& name = c.input_names[k];
        if (name.empty())
            throw Error("input " + std::to_string(k) +
                        " has no symbol name; cannot classify inputs");
        if (name.compare(0, prefix.size(), prefix) == 0)
            spec.controllable.push_back(k);
        else
            spec.uncontrollable.push_back(k);
    }
    if (spec.controllable.empty() && !c.inputs.empty())
        spec.warnings.push_back("no controllable inputs: the system has no choices");
    return spec;
}

}  // namespace osynt
