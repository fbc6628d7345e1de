#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sqlforge {

// Node kinds of the SQL tree. Placeholder only ever appears inside
// template skeletons, never in a parsed statement.
enum class NodeKind : uint8_t {
    Statement,
    Clause,
    Expression,
    Identifier,
    Literal,
    Keyword,
    FunctionCall,
    Operator,
    Placeholder,
};

// Leaf token classes. Every leaf of a parsed statement carries exactly
// one of the first eight; placeholder leaves carry PlaceholderMark.
enum class TokenClass : uint8_t {
    Keyword,
    Identifier,
    NumericLiteral,
    StringLiteral,
    Operator,
    Punctuation,
    Star,
    FunctionName,
    PlaceholderMark,
};

enum class FillType : uint8_t { TABLE, COLUMN, ALIAS, NUM_VALUE, STR_VALUE };

inline const char* fill_type_name(FillType t) {
    switch (t) {
        case FillType::TABLE: return "TABLE";
        case FillType::COLUMN: return "COLUMN";
        case FillType::ALIAS: return "ALIAS";
        case FillType::NUM_VALUE: return "NUM_VALUE";
        case FillType::STR_VALUE: return "STR_VALUE";
    }
    return "?";
}

// Rendered spelling of a placeholder, e.g. "[table]".
inline const char* fill_type_marker(FillType t) {
    switch (t) {
        case FillType::TABLE: return "[table]";
        case FillType::COLUMN: return "[column]";
        case FillType::ALIAS: return "[alias]";
        case FillType::NUM_VALUE: return "[number]";
        case FillType::STR_VALUE: return "[string]";
    }
    return "[?]";
}

struct Node {
    NodeKind kind = NodeKind::Expression;
    // Leaves: the token text (keywords upper-cased, identifier case
    // preserved, string literals quoted). Clause nodes: the clause name
    // ("SELECT", "FROM", "JOIN", ...). Statement nodes: "SELECT" or
    // "COMPOUND".
    std::string label;
    TokenClass token_class = TokenClass::Keyword;
    FillType fill_type = FillType::COLUMN;   // placeholder leaves only
    int ordinal = -1;                        // placeholder leaves only
    std::vector<Node> children;

    bool is_leaf() const { return children.empty() && kind != NodeKind::Expression &&
                                  kind != NodeKind::Clause && kind != NodeKind::Statement &&
                                  kind != NodeKind::FunctionCall; }

    static Node leaf(NodeKind kind, TokenClass cls, std::string text) {
        Node n;
        n.kind = kind;
        n.token_class = cls;
        n.label = std::move(text);
        return n;
    }

    static Node placeholder(FillType type, int ordinal) {
        Node n;
        n.kind = NodeKind::Placeholder;
        n.token_class = TokenClass::PlaceholderMark;
        n.fill_type = type;
        n.ordinal = ordinal;
        n.label = fill_type_marker(type);
        return n;
    }

    static Node group(NodeKind kind, std::string label = {}) {
        Node n;
        n.kind = kind;
        n.label = std::move(label);
        return n;
    }
};

// Structural equality. Placeholder ordinals are derived from pre-order
// position, so equal structure implies equal ordinals; they are not
// compared directly.
inline bool equal_tree(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.label != b.label) return false;
    if (a.children.empty() != b.children.empty()) return false;
    if (a.children.empty()) {
        if (a.token_class != b.token_class) return false;
        if (a.kind == NodeKind::Placeholder && a.fill_type != b.fill_type) return false;
    }
    if (a.children.size() != b.children.size()) return false;
    for (size_t i = 0; i < a.children.size(); ++i) {
        if (!equal_tree(a.children[i], b.children[i])) return false;
    }
    return true;
}

// A parsed SQL statement.
struct SqlAst {
    Node root;

    bool operator==(const SqlAst& other) const { return equal_tree(root, other.root); }
};

// Pre-order walk over every node.
inline void walk(const Node& node, const std::function<void(const Node&)>& fn) {
    fn(node);
    for (const auto& child : node.children) walk(child, fn);
}

// Pre-order walk with mutation access.
inline void walk_mut(Node& node, const std::function<void(Node&)>& fn) {
    fn(node);
    for (auto& child : node.children) walk_mut(child, fn);
}

// Leaves of the tree in rendering order.
inline void collect_leaves(const Node& node, std::vector<const Node*>& out) {
    if (node.children.empty()) {
        out.push_back(&node);
        return;
    }
    for (const auto& child : node.children) collect_leaves(child, out);
}

inline std::vector<const Node*> leaves_of(const Node& node) {
    std::vector<const Node*> out;
    collect_leaves(node, out);
    return out;
}

// Canonical clause positions inside one SELECT statement.
inline int clause_rank(const std::string& clause_name) {
    if (clause_name == "SELECT") return 0;
    if (clause_name == "FROM") return 1;
    if (clause_name == "JOIN") return 2;
    if (clause_name == "WHERE") return 3;
    if (clause_name == "GROUP BY") return 4;
    if (clause_name == "HAVING") return 5;
    if (clause_name == "ORDER BY") return 6;
    if (clause_name == "LIMIT") return 7;
    return -1;
}

}  // namespace sqlforge
