#include "scsim/compiler.hpp"

#include <cctype>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

namespace scsim {

namespace {

enum class TokKind { Ident, Number, Punct, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;
    double value = 0.0;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    Lexer(const std::string& text, std::string filename)
        : text_(text), filename_(std::move(filename)) {}

    Token next() {
        skip_ws_and_comments();
        Token tok;
        tok.line = line_;
        tok.col = col_;
        if (pos_ >= text_.size()) return tok;

        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            tok.kind = TokKind::Ident;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                tok.text += advance();
            return tok;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            tok.kind = TokKind::Number;
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                    text_[pos_] == 'e' || text_[pos_] == 'E' ||
                    ((text_[pos_] == '+' || text_[pos_] == '-') && !tok.text.empty() &&
                     (tok.text.back() == 'e' || tok.text.back() == 'E'))))
                tok.text += advance();
            char* end = nullptr;
            tok.value = std::strtod(tok.text.c_str(), &end);
            if (end != tok.text.c_str() + tok.text.size())
                throw ParseError(filename_, tok.line, tok.col,
                                 "bad number literal `" + tok.text + "`");
            return tok;
        }
        if (std::string("{}()|,=!").find(c) != std::string::npos) {
            tok.kind = TokKind::Punct;
            tok.text = advance();
            return tok;
        }
        throw ParseError(filename_, line_, col_, std::string("unexpected character `") + c + "`");
    }

    const std::string& filename() const { return filename_; }

private:
    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_ws_and_comments() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    const std::string& text_;
    std::string filename_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    Parser(const std::string& text, const std::string& filename)
        : lexer_(text, filename), filename_(filename) {
        tok_ = lexer_.next();
    }

    NetworkSpec parse() {
        NetworkSpec spec;
        expect_keyword("network");
        spec.name = expect_ident("network name");
        expect_punct("{");
        while (is_keyword("node")) spec.nodes.push_back(parse_node(spec));
        if (spec.nodes.empty()) throw error("network declares no nodes");
        spec.query = parse_query(spec);
        expect_punct("}");
        if (tok_.kind != TokKind::End) throw error("trailing input after network");
        return spec;
    }

private:
    NodeDecl parse_node(const NetworkSpec& spec) {
        NodeDecl node;
        node.span = {tok_.line, tok_.col};
        expect_keyword("node");
        node.name = expect_ident("node name");
        if (spec.find(node.name))
            throw error("duplicate node `" + node.name + "`");
        if (is_punct("|")) {
            advance();
            node.parents.push_back(parse_parent_ref(spec));
            while (is_punct(",")) {
                advance();
                node.parents.push_back(parse_parent_ref(spec));
            }
            std::set<std::string> uniq(node.parents.begin(), node.parents.end());
            if (uniq.size() != node.parents.size())
                throw error("node `" + node.name + "` repeats a parent");
            if (node.parents.size() > 2)
                throw error("node `" + node.name + "` has more than two parents");
        }
        expect_punct("{");

        std::size_t entries = std::size_t{1} << node.parents.size();
        node.table.assign(entries, -1.0);
        while (!is_punct("}")) parse_assignment(node);
        advance();  // '}'

        for (std::size_t idx = 0; idx < entries; ++idx)
            if (node.table[idx] < 0.0)
                throw ParseError(filename_, node.span.line, node.span.col,
                                 "node `" + node.name + "` is missing the table entry for " +
                                     condition_name(node, idx));
        return node;
    }

    std::string parse_parent_ref(const NetworkSpec& spec) {
        Token t = tok_;
        std::string name = expect_ident("parent name");
        if (!spec.find(name))
            throw ParseError(filename_, t.line, t.col,
                             "parent `" + name + "` is not declared (declare parents first)");
        return name;
    }

    void parse_assignment(NodeDecl& node) {
        Token key = tok_;
        std::string p = expect_ident("probability assignment");
        if (p != "p") throw ParseError(filename_, key.line, key.col, "expected `p`");

        std::size_t idx = 0;
        bool indexed = false;
        if (is_punct("(")) {
            advance();
            std::string target = expect_ident("node name");
            if (target != node.name)
                throw error("assignment names `" + target + "` inside node `" + node.name + "`");
            if (is_punct("|")) {
                advance();
                idx = parse_condition(node);
                indexed = true;
            }
            expect_punct(")");
        }
        if (!indexed && !node.parents.empty())
            throw error("node `" + node.name + "` has parents; use p(" + node.name +
                        "|...) assignments");
        expect_punct("=");
        Token val = tok_;
        if (tok_.kind != TokKind::Number) throw error("expected a probability literal");
        double v = tok_.value;
        advance();
        if (!(v >= 0.0 && v <= 1.0))
            throw ParseError(filename_, val.line, val.col,
                             "probability literal `" + val.text + "` outside [0,1]");
        if (node.table[idx] >= 0.0)
            throw ParseError(filename_, val.line, val.col,
                             "duplicate table entry for " + condition_name(node, idx));
        node.table[idx] = v;
    }

    // Parses `[!]P1, [!]P2, ...`; every declared parent must appear exactly
    // once. Returns the table index (first declared parent = MSB).
    std::size_t parse_condition(const NodeDecl& node) {
        std::map<std::string, bool> seen;
        do {
            bool negated = false;
            if (is_punct("!")) {
                advance();
                negated = true;
            }
            Token t = tok_;
            std::string name = expect_ident("parent literal");
            bool known = false;
            for (const auto& p : node.parents) known |= (p == name);
            if (!known)
                throw ParseError(filename_, t.line, t.col,
                                 "`" + name + "` is not a parent of `" + node.name + "`");
            if (seen.count(name))
                throw ParseError(filename_, t.line, t.col,
                                 "parent `" + name + "` appears twice in a condition");
            seen[name] = !negated;
            if (!is_punct(",")) break;
            advance();
        } while (true);
        if (seen.size() != node.parents.size())
            throw error("condition must assign every parent of `" + node.name + "`");
        std::size_t idx = 0;
        for (const auto& p : node.parents) idx = idx * 2 + (seen[p] ? 1 : 0);
        return idx;
    }

    Query parse_query(const NetworkSpec& spec) {
        Query q;
        q.span = {tok_.line, tok_.col};
        expect_keyword("query");
        std::string p = expect_ident("query");
        if (p != "P") throw ParseError(filename_, q.span.line, q.span.col, "expected `P(...)`");
        expect_punct("(");
        q.target = expect_ident("query target");
        if (!spec.find(q.target)) throw error("query references undeclared node `" + q.target + "`");
        if (is_punct("|")) {
            advance();
            q.evidence = expect_ident("query evidence");
            if (!spec.find(*q.evidence))
                throw error("query references undeclared node `" + *q.evidence + "`");
        }
        expect_punct(")");
        return q;
    }

    std::string condition_name(const NodeDecl& node, std::size_t idx) const {
        if (node.parents.empty()) return "the prior";
        std::string s = "p(" + node.name + "|";
        for (std::size_t j = 0; j < node.parents.size(); ++j) {
            bool set = (idx >> (node.parents.size() - 1 - j)) & 1;
            s += std::string(j ? "," : "") + (set ? "" : "!") + node.parents[j];
        }
        return s + ")";
    }

    // token helpers
    void advance() { tok_ = lexer_.next(); }
    bool is_keyword(const std::string& kw) const {
        return tok_.kind == TokKind::Ident && tok_.text == kw;
    }
    bool is_punct(const std::string& p) const {
        return tok_.kind == TokKind::Punct && tok_.text == p;
    }
    void expect_keyword(const std::string& kw) {
        if (!is_keyword(kw)) throw error("expected `" + kw + "`");
        advance();
    }
    void expect_punct(const std::string& p) {
        if (!is_punct(p)) throw error("expected `" + p + "`");
        advance();
    }
    std::string expect_ident(const std::string& what) {
        if (tok_.kind != TokKind::Ident) throw error("expected " + what);
        std::string s = tok_.text;
        advance();
        return s;
    }
    ParseError error(const std::string& msg) const {
        return ParseError(filename_, tok_.line, tok_.col, msg);
    }

    Lexer lexer_;
    std::string filename_;
    Token tok_;
};

std::string edge_list(const NetworkSpec& spec) {
    std::string s;
    for (const auto& n : spec.nodes)
        for (const auto& p : n.parents) s += (s.empty() ? "" : ", ") + p + "->" + n.name;
    return s.empty() ? "(none)" : s;
}

[[noreturn]] void unsupported_query(const NetworkSpec& spec, const std::string& allowed) {
    throw ParseError(spec.filename, spec.query.span.line, spec.query.span.col,
                     "unsupported query for this topology; expected one of: " + allowed);
}

}  // namespace

const NodeDecl* NetworkSpec::find(const std::string& node_name) const {
    for (const auto& n : nodes)
        if (n.name == node_name) return &n;
    return nullptr;
}

NetworkSpec parse_network(const std::string& text, const std::string& filename) {
    NetworkSpec spec = Parser(text, filename).parse();
    spec.filename = filename;
    return spec;
}

CompilePlan compile_network(const NetworkSpec& spec) {
    std::vector<const NodeDecl*> roots, children;
    for (const auto& n : spec.nodes)
        (n.parents.empty() ? roots : children).push_back(&n);

    CompilePlan plan;
    const auto& q = spec.query;

    if (spec.nodes.size() == 2 && roots.size() == 1 && children.size() == 1 &&
        children[0]->parents == std::vector<std::string>{roots[0]->name}) {
        const auto& parent = *roots[0];
        const auto& child = *children[0];
        bool posterior = q.evidence.has_value();
        if (posterior && !(q.target == parent.name && *q.evidence == child.name))
            unsupported_query(spec, "P(" + child.name + "), P(" + parent.name + "|" +
                                        child.name + ")");
        if (!posterior && q.target != child.name)
            unsupported_query(spec, "P(" + child.name + "), P(" + parent.name + "|" +
                                        child.name + ")");
        plan.kind = StructureKind::OneParentOneChild;
        plan.netlist = build_inference_netlist(parent.name, child.name, parent.table[0],
                                               child.table[1], child.table[0], posterior);
        return plan;
    }

    if (spec.nodes.size() == 3 && roots.size() == 2 && children.size() == 1 &&
        children[0]->parents.size() == 2) {
        const auto& child = *children[0];
        const auto& p1 = *spec.find(child.parents[0]);
        const auto& p2 = *spec.find(child.parents[1]);
        std::optional<int> posterior_parent;
        if (q.evidence) {
            if (*q.evidence != child.name || (q.target != p1.name && q.target != p2.name))
                unsupported_query(spec, "P(" + child.name + "), P(<parent>|" + child.name + ")");
            posterior_parent = q.target == p1.name ? 0 : 1;
        } else if (q.target != child.name) {
            unsupported_query(spec, "P(" + child.name + "), P(<parent>|" + child.name + ")");
        }
        plan.kind = StructureKind::TwoParentOneChild;
        plan.netlist = build_two_parent_netlist(
            p1.name, p2.name, child.name, p1.table[0], p2.table[0],
            {child.table[0], child.table[1], child.table[2], child.table[3]},
            posterior_parent);
        return plan;
    }

    if (spec.nodes.size() == 3 && roots.size() == 1 && children.size() == 2 &&
        children[0]->parents == std::vector<std::string>{roots[0]->name} &&
        children[1]->parents == std::vector<std::string>{roots[0]->name}) {
        const auto& parent = *roots[0];
        const auto& c1 = *children[0];
        const auto& c2 = *children[1];
        std::optional<int> posterior_child;
        if (q.evidence) {
            if (q.target != parent.name || (*q.evidence != c1.name && *q.evidence != c2.name))
                unsupported_query(spec, "P(" + c1.name + "), P(" + c2.name + "), P(" +
                                            parent.name + "|<child>)");
            posterior_child = *q.evidence == c1.name ? 0 : 1;
        } else if (q.target != c1.name && q.target != c2.name) {
            unsupported_query(spec,
                              "P(" + c1.name + "), P(" + c2.name + "), P(" + parent.name +
                                  "|<child>)");
        }
        plan.kind = StructureKind::OneParentTwoChild;
        plan.netlist = build_children_netlist(parent.name, c1.name, c2.name, parent.table[0],
                                              {c1.table[0], c1.table[1]},
                                              {c2.table[0], c2.table[1]}, posterior_child);
        return plan;
    }

    throw UnsupportedStructureError(
        "network topology is not one-parent-one-child, two-parent-one-child, or "
        "one-parent-two-child; edges: " +
        edge_list(spec));
}

std::string emit_plan(const CompilePlan& plan) { return emit_netlist(plan.netlist); }

CompilePlan load_plan(const std::string& text, const std::string& filename) {
    CompilePlan plan;
    plan.kind = StructureKind::Custom;
    plan.netlist = load_netlist(text, filename);
    return plan;
}

}  // namespace scsim
