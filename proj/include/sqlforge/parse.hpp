#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sqlforge/ast.hpp"
#include "sqlforge/lex.hpp"

namespace sqlforge {

namespace detail {

// Recursive-descent parser for the SQLite SELECT subset: single SELECT
// statements with JOIN/ON, WHERE, GROUP BY, HAVING, ORDER BY, LIMIT,
// aliases, function calls, nested subqueries, UNION/INTERSECT/EXCEPT,
// DISTINCT and CASE. Everything else is a ParseError.
class Parser {
public:
    Parser(std::vector<Token> tokens, size_t text_size)
        : tokens_(std::move(tokens)), end_offset_(text_size) {}

    Node parse_statement_eof() {
        if (tokens_.empty()) throw ParseError(0, "SELECT statement");
        Node stmt = parse_query();
        if (is_punct(";")) advance();
        if (pos_ < tokens_.size()) {
            throw ParseError(cur_offset(), "end of statement");
        }
        return stmt;
    }

private:
    std::vector<Token> tokens_;
    size_t pos_ = 0;
    size_t end_offset_;

    // --- token helpers ---
    const Token* peek(size_t ahead = 0) const {
        return pos_ + ahead < tokens_.size() ? &tokens_[pos_ + ahead] : nullptr;
    }
    size_t cur_offset() const { return pos_ < tokens_.size() ? tokens_[pos_].offset : end_offset_; }
    const Token& advance() { return tokens_[pos_++]; }

    bool is_kw(std::string_view word, size_t ahead = 0) const {
        const Token* t = peek(ahead);
        return t && t->cls == TokenClass::Keyword && t->text == word;
    }
    bool is_punct(std::string_view p, size_t ahead = 0) const {
        const Token* t = peek(ahead);
        return t && t->cls == TokenClass::Punctuation && t->text == p;
    }
    bool is_op(std::string_view o) const {
        const Token* t = peek();
        return t && t->cls == TokenClass::Operator && t->text == o;
    }
    bool is_ident() const {
        const Token* t = peek();
        return t && t->cls == TokenClass::Identifier;
    }
    bool is_placeholder() const {
        const Token* t = peek();
        return t && t->cls == TokenClass::PlaceholderMark;
    }

    Token expect_kw(std::string_view word) {
        if (!is_kw(word)) throw ParseError(cur_offset(), std::string(word));
        return advance();
    }
    Token expect_punct(std::string_view p) {
        if (!is_punct(p)) throw ParseError(cur_offset(), "'" + std::string(p) + "'");
        return advance();
    }

    static Node kw_leaf(const Token& t) { return Node::leaf(NodeKind::Keyword, TokenClass::Keyword, t.text); }
    static Node punct_leaf(const Token& t) { return Node::leaf(NodeKind::Operator, TokenClass::Punctuation, t.text); }
    static Node op_leaf(const Token& t) { return Node::leaf(NodeKind::Operator, TokenClass::Operator, t.text); }
    static Node ident_leaf(const Token& t) { return Node::leaf(NodeKind::Identifier, TokenClass::Identifier, t.text); }
    static Node star_leaf(const Token& t, NodeKind kind) { return Node::leaf(kind, TokenClass::Star, t.text); }
    static Node placeholder_leaf(const Token& t) {
        Node n = Node::placeholder(t.placeholder_type, -1);
        return n;
    }

    // --- grammar ---
    Node parse_query() {
        Node first = parse_select();
        if (!(is_kw("UNION") || is_kw("INTERSECT") || is_kw("EXCEPT"))) return first;

        Node compound = Node::group(NodeKind::Statement, "COMPOUND");
        compound.children.push_back(std::move(first));
        while (is_kw("UNION") || is_kw("INTERSECT") || is_kw("EXCEPT")) {
            compound.children.push_back(kw_leaf(advance()));
            if (is_kw("ALL")) compound.children.push_back(kw_leaf(advance()));
            compound.children.push_back(parse_select());
        }
        return compound;
    }

    Node parse_select() {
        Node stmt = Node::group(NodeKind::Statement, "SELECT");

        Node select_clause = Node::group(NodeKind::Clause, "SELECT");
        select_clause.children.push_back(kw_leaf(expect_kw("SELECT")));
        if (is_kw("DISTINCT")) select_clause.children.push_back(kw_leaf(advance()));
        parse_select_items(select_clause);
        stmt.children.push_back(std::move(select_clause));

        if (is_kw("FROM")) {
            Node from_clause = Node::group(NodeKind::Clause, "FROM");
            from_clause.children.push_back(kw_leaf(advance()));
            from_clause.children.push_back(parse_table_object());
            while (is_punct(",")) {
                from_clause.children.push_back(punct_leaf(advance()));
                from_clause.children.push_back(parse_table_object());
            }
            stmt.children.push_back(std::move(from_clause));

            while (is_kw("JOIN") || is_kw("LEFT") || is_kw("RIGHT") || is_kw("INNER") ||
                   is_kw("OUTER") || is_kw("CROSS")) {
                stmt.children.push_back(parse_join_clause());
            }
        }
        if (is_kw("WHERE")) {
            Node clause = Node::group(NodeKind::Clause, "WHERE");
            clause.children.push_back(kw_leaf(advance()));
            clause.children.push_back(parse_expr());
            stmt.children.push_back(std::move(clause));
        }
        if (is_kw("GROUP")) {
            Node clause = Node::group(NodeKind::Clause, "GROUP BY");
            clause.children.push_back(kw_leaf(advance()));
            clause.children.push_back(kw_leaf(expect_kw("BY")));
            clause.children.push_back(parse_expr());
            while (is_punct(",")) {
                clause.children.push_back(punct_leaf(advance()));
                clause.children.push_back(parse_expr());
            }
            stmt.children.push_back(std::move(clause));
        }
        if (is_kw("HAVING")) {
            Node clause = Node::group(NodeKind::Clause, "HAVING");
            clause.children.push_back(kw_leaf(advance()));
            clause.children.push_back(parse_expr());
            stmt.children.push_back(std::move(clause));
        }
        if (is_kw("ORDER")) {
            Node clause = Node::group(NodeKind::Clause, "ORDER BY");
            clause.children.push_back(kw_leaf(advance()));
            clause.children.push_back(kw_leaf(expect_kw("BY")));
            parse_ordering_term(clause);
            while (is_punct(",")) {
                clause.children.push_back(punct_leaf(advance()));
                parse_ordering_term(clause);
            }
            stmt.children.push_back(std::move(clause));
        }
        if (is_kw("LIMIT")) {
            Node clause = Node::group(NodeKind::Clause, "LIMIT");
            clause.children.push_back(kw_leaf(advance()));
            clause.children.push_back(parse_additive());
            if (is_kw("OFFSET")) {
                clause.children.push_back(kw_leaf(advance()));
                clause.children.push_back(parse_additive());
            } else if (is_punct(",")) {
                clause.children.push_back(punct_leaf(advance()));
                clause.children.push_back(parse_additive());
            }
            stmt.children.push_back(std::move(clause));
        }
        return stmt;
    }

    void parse_select_items(Node& clause) {
        clause.children.push_back(parse_select_item());
        while (is_punct(",")) {
            clause.children.push_back(punct_leaf(advance()));
            clause.children.push_back(parse_select_item());
        }
    }

    Node parse_select_item() {
        const Token* t = peek();
        if (t && t->cls == TokenClass::Star) {
            return star_leaf(advance(), NodeKind::Identifier);
        }
        Node expr = parse_expr();
        if (is_kw("AS")) {
            Node wrapped = Node::group(NodeKind::Expression);
            wrapped.children.push_back(std::move(expr));
            wrapped.children.push_back(kw_leaf(advance()));
            wrapped.children.push_back(parse_name_leaf("alias name"));
            return wrapped;
        }
        return expr;
    }

    Node parse_name_leaf(const char* what) {
        if (is_ident()) return ident_leaf(advance());
        if (is_placeholder()) return placeholder_leaf(advance());
        throw ParseError(cur_offset(), what);
    }

    Node parse_join_clause() {
        Node clause = Node::group(NodeKind::Clause, "JOIN");
        while (is_kw("LEFT") || is_kw("RIGHT") || is_kw("INNER") || is_kw("OUTER") ||
               is_kw("CROSS")) {
            clause.children.push_back(kw_leaf(advance()));
        }
        clause.children.push_back(kw_leaf(expect_kw("JOIN")));
        clause.children.push_back(parse_table_object());
        if (is_kw("ON")) {
            clause.children.push_back(kw_leaf(advance()));
            clause.children.push_back(parse_expr());
        }
        return clause;
    }

    Node parse_table_object() {
        Node base;
        if (is_punct("(")) {
            Node sub = Node::group(NodeKind::Expression);
            sub.children.push_back(punct_leaf(advance()));
            sub.children.push_back(parse_query());
            sub.children.push_back(punct_leaf(expect_punct(")")));
            base = std::move(sub);
        } else if (is_ident() || is_placeholder()) {
            base = parse_name_leaf("table name");
        } else {
            throw ParseError(cur_offset(), "table name or subquery");
        }

        if (is_kw("AS")) {
            Node wrapped = Node::group(NodeKind::Expression);
            wrapped.children.push_back(std::move(base));
            wrapped.children.push_back(kw_leaf(advance()));
            wrapped.children.push_back(parse_name_leaf("alias name"));
            return wrapped;
        }
        if (is_ident() || is_placeholder()) {  // bare alias
            Node wrapped = Node::group(NodeKind::Expression);
            wrapped.children.push_back(std::move(base));
            wrapped.children.push_back(parse_name_leaf("alias name"));
            return wrapped;
        }
        return base;
    }

    void parse_ordering_term(Node& clause) {
        clause.children.push_back(parse_expr());
        if (is_kw("ASC") || is_kw("DESC")) clause.children.push_back(kw_leaf(advance()));
    }

    // expression precedence: OR < AND < NOT < predicate < additive < multiplicative < unary
    Node parse_expr() { return parse_or(); }

    Node parse_or() {
        Node lhs = parse_and();
        while (is_kw("OR")) {
            Node bin = Node::group(NodeKind::Expression);
            bin.children.push_back(std::move(lhs));
            bin.children.push_back(kw_leaf(advance()));
            bin.children.push_back(parse_and());
            lhs = std::move(bin);
        }
        return lhs;
    }

    Node parse_and() {
        Node lhs = parse_not();
        while (is_kw("AND")) {
            Node bin = Node::group(NodeKind::Expression);
            bin.children.push_back(std::move(lhs));
            bin.children.push_back(kw_leaf(advance()));
            bin.children.push_back(parse_not());
            lhs = std::move(bin);
        }
        return lhs;
    }

    Node parse_not() {
        if (is_kw("NOT") && !is_kw("IN", 1) && !is_kw("LIKE", 1) && !is_kw("BETWEEN", 1) &&
            !is_kw("GLOB", 1)) {
            Node n = Node::group(NodeKind::Expression);
            n.children.push_back(kw_leaf(advance()));
            n.children.push_back(parse_not());
            return n;
        }
        return parse_predicate();
    }

    Node parse_predicate() {
        Node lhs = parse_additive();
        for (;;) {
            if (is_op("=") || is_op("==") || is_op("!=") || is_op("<>") || is_op("<") ||
                is_op("<=") || is_op(">") || is_op(">=")) {
                Node bin = Node::group(NodeKind::Expression);
                bin.children.push_back(std::move(lhs));
                bin.children.push_back(op_leaf(advance()));
                bin.children.push_back(parse_additive());
                lhs = std::move(bin);
                continue;
            }
            const bool negated = is_kw("NOT") &&
                (is_kw("IN", 1) || is_kw("LIKE", 1) || is_kw("BETWEEN", 1) || is_kw("GLOB", 1));
            if (negated || is_kw("IN") || is_kw("LIKE") || is_kw("BETWEEN") || is_kw("GLOB")) {
                Node bin = Node::group(NodeKind::Expression);
                bin.children.push_back(std::move(lhs));
                if (negated) bin.children.push_back(kw_leaf(advance()));
                if (is_kw("LIKE") || is_kw("GLOB")) {
                    bin.children.push_back(kw_leaf(advance()));
                    bin.children.push_back(parse_additive());
                } else if (is_kw("BETWEEN")) {
                    bin.children.push_back(kw_leaf(advance()));
                    bin.children.push_back(parse_additive());
                    bin.children.push_back(kw_leaf(expect_kw("AND")));
                    bin.children.push_back(parse_additive());
                } else {
                    bin.children.push_back(kw_leaf(expect_kw("IN")));
                    bin.children.push_back(parse_in_operand());
                }
                lhs = std::move(bin);
                continue;
            }
            if (is_kw("IS")) {
                Node bin = Node::group(NodeKind::Expression);
                bin.children.push_back(std::move(lhs));
                bin.children.push_back(kw_leaf(advance()));
                if (is_kw("NOT")) bin.children.push_back(kw_leaf(advance()));
                bin.children.push_back(kw_leaf(expect_kw("NULL")));
                lhs = std::move(bin);
                continue;
            }
            return lhs;
        }
    }

    Node parse_in_operand() {
        Node group = Node::group(NodeKind::Expression);
        group.children.push_back(punct_leaf(expect_punct("(")));
        if (is_kw("SELECT")) {
            group.children.push_back(parse_query());
        } else {
            group.children.push_back(parse_additive());
            while (is_punct(",")) {
                group.children.push_back(punct_leaf(advance()));
                group.children.push_back(parse_additive());
            }
        }
        group.children.push_back(punct_leaf(expect_punct(")")));
        return group;
    }

    Node parse_additive() {
        Node lhs = parse_multiplicative();
        while (is_op("+") || is_op("-") || is_op("||")) {
            Node bin = Node::group(NodeKind::Expression);
            bin.children.push_back(std::move(lhs));
            bin.children.push_back(op_leaf(advance()));
            bin.children.push_back(parse_multiplicative());
            lhs = std::move(bin);
        }
        return lhs;
    }

    Node parse_multiplicative() {
        Node lhs = parse_unary();
        for (;;) {
            const Token* t = peek();
            const bool mul_star = t && t->cls == TokenClass::Star;
            if (!(mul_star || is_op("/") || is_op("%"))) return lhs;
            Node bin = Node::group(NodeKind::Expression);
            bin.children.push_back(std::move(lhs));
            if (mul_star) {
                bin.children.push_back(star_leaf(advance(), NodeKind::Operator));
            } else {
                bin.children.push_back(op_leaf(advance()));
            }
            bin.children.push_back(parse_unary());
            lhs = std::move(bin);
        }
    }

    Node parse_unary() {
        if (is_op("-") || is_op("+")) {
            Node n = Node::group(NodeKind::Expression);
            n.children.push_back(op_leaf(advance()));
            n.children.push_back(parse_unary());
            return n;
        }
        return parse_primary();
    }

    Node parse_primary() {
        const Token* t = peek();
        if (!t) throw ParseError(end_offset_, "expression");

        if (t->cls == TokenClass::NumericLiteral) {
            return Node::leaf(NodeKind::Literal, TokenClass::NumericLiteral, advance().text);
        }
        if (t->cls == TokenClass::StringLiteral) {
            return Node::leaf(NodeKind::Literal, TokenClass::StringLiteral, advance().text);
        }
        if (is_kw("NULL")) {
            return kw_leaf(advance());
        }
        if (is_kw("CASE")) return parse_case();
        if (is_kw("EXISTS")) {
            Node n = Node::group(NodeKind::Expression);
            n.children.push_back(kw_leaf(advance()));
            Node sub = Node::group(NodeKind::Expression);
            sub.children.push_back(punct_leaf(expect_punct("(")));
            sub.children.push_back(parse_query());
            sub.children.push_back(punct_leaf(expect_punct(")")));
            n.children.push_back(std::move(sub));
            return n;
        }
        if (t->cls == TokenClass::Identifier && is_punct("(", 1)) {
            return parse_function_call();
        }
        if (t->cls == TokenClass::Identifier || t->cls == TokenClass::PlaceholderMark) {
            Node name = (t->cls == TokenClass::Identifier) ? ident_leaf(advance())
                                                           : placeholder_leaf(advance());
            if (is_punct(".")) {
                Node qref = Node::group(NodeKind::Expression);
                qref.children.push_back(std::move(name));
                qref.children.push_back(punct_leaf(advance()));
                const Token* m = peek();
                if (m && m->cls == TokenClass::Star) {
                    qref.children.push_back(star_leaf(advance(), NodeKind::Identifier));
                } else {
                    qref.children.push_back(parse_name_leaf("column name"));
                }
                return qref;
            }
            return name;
        }
        if (is_punct("(")) {
            Node group = Node::group(NodeKind::Expression);
            group.children.push_back(punct_leaf(advance()));
            if (is_kw("SELECT")) {
                group.children.push_back(parse_query());
            } else {
                group.children.push_back(parse_expr());
            }
            group.children.push_back(punct_leaf(expect_punct(")")));
            return group;
        }
        throw ParseError(t->offset, "expression");
    }

    Node parse_function_call() {
        Node call = Node::group(NodeKind::FunctionCall);
        const Token name = advance();
        call.children.push_back(Node::leaf(NodeKind::Keyword, TokenClass::FunctionName,
                                           known_functions().count(to_upper(name.text))
                                               ? to_upper(name.text)
                                               : name.text));
        call.children.push_back(punct_leaf(expect_punct("(")));
        if (is_kw("DISTINCT")) call.children.push_back(kw_leaf(advance()));
        const Token* t = peek();
        if (t && t->cls == TokenClass::Star) {
            call.children.push_back(star_leaf(advance(), NodeKind::Identifier));
        } else if (!is_punct(")")) {
            call.children.push_back(parse_expr());
            while (is_punct(",")) {
                call.children.push_back(punct_leaf(advance()));
                call.children.push_back(parse_expr());
            }
        }
        call.children.push_back(punct_leaf(expect_punct(")")));
        return call;
    }

    Node parse_case() {
        Node n = Node::group(NodeKind::Expression);
        n.children.push_back(kw_leaf(expect_kw("CASE")));
        if (!is_kw("WHEN")) n.children.push_back(parse_expr());
        if (!is_kw("WHEN")) throw ParseError(cur_offset(), "WHEN");
        while (is_kw("WHEN")) {
            n.children.push_back(kw_leaf(advance()));
            n.children.push_back(parse_expr());
            n.children.push_back(kw_leaf(expect_kw("THEN")));
            n.children.push_back(parse_expr());
        }
        if (is_kw("ELSE")) {
            n.children.push_back(kw_leaf(advance()));
            n.children.push_back(parse_expr());
        }
        n.children.push_back(kw_leaf(expect_kw("END")));
        return n;
    }
};

inline void assign_placeholder_ordinals(Node& root) {
    int next = 0;
    walk_mut(root, [&](Node& n) {
        if (n.kind == NodeKind::Placeholder) n.ordinal = next++;
    });
}

}  // namespace detail

// Parses one SQL statement of the supported subset into its canonical AST.
inline SqlAst parse_sql(const std::string& sql_text) {
    if (trim(sql_text).empty()) throw ParseError(0, "non-empty SQL text");
    auto tokens = lex_sql(sql_text, /*allow_placeholders=*/false);
    detail::Parser parser(std::move(tokens), sql_text.size());
    return SqlAst{parser.parse_statement_eof()};
}

// Parses rendered template text (placeholders allowed) into a skeleton.
inline Node parse_template_text(const std::string& text) {
    if (trim(text).empty()) throw ParseError(0, "non-empty template text");
    auto tokens = lex_sql(text, /*allow_placeholders=*/true);
    detail::Parser parser(std::move(tokens), text.size());
    Node skeleton = parser.parse_statement_eof();
    detail::assign_placeholder_ordinals(skeleton);
    return skeleton;
}

// Token stream of a statement with final classes assigned: an identifier
// directly followed by "(" is classified function-name, reserved words
// keyword, everything else as lexed. Statement must parse.
inline std::vector<Token> classified_tokens(const std::string& sql_text) {
    parse_sql(sql_text);  // validate membership in the subset
    auto tokens = lex_sql(sql_text, false);
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i].cls == TokenClass::Identifier && i + 1 < tokens.size() &&
            tokens[i + 1].cls == TokenClass::Punctuation && tokens[i + 1].text == "(") {
            tokens[i].cls = TokenClass::FunctionName;
            if (known_functions().count(to_upper(tokens[i].text))) {
                tokens[i].text = to_upper(tokens[i].text);
            }
        }
    }
    return tokens;
}

}  // namespace sqlforge
