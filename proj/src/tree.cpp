#include "dptlab/tree.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "dptlab/error.hpp"
#include "dptlab/partial_assignment.hpp"

namespace dptlab {

int KFoldTree::add_leaf(std::vector<std::uint32_t> outputs) {
  Node n;
  n.outputs = std::move(outputs);
  nodes_.push_back(std::move(n));
  root_ = static_cast<int>(nodes_.size()) - 1;
  return root_;
}

int KFoldTree::add_query(int instance, int index, int left, int right) {
  Node n;
  n.leaf = false;
  n.instance = instance;
  n.index = index;
  n.left = left;
  n.right = right;
  nodes_.push_back(std::move(n));
  root_ = static_cast<int>(nodes_.size()) - 1;
  return root_;
}

int KFoldTree::output_width() const {
  for (const Node& n : nodes_)
    if (n.leaf) return static_cast<int>(n.outputs.size());
  return 0;
}

int KFoldTree::depth() const {
  if (root_ < 0) return 0;
  std::function<int(int)> rec = [&](int id) -> int {
    const Node& n = node(id);
    return n.leaf ? 0 : 1 + std::max(rec(n.left), rec(n.right));
  };
  return rec(root_);
}

std::size_t KFoldTree::leaf_count() const {
  if (root_ < 0) return 0;
  std::function<std::size_t(int)> rec = [&](int id) -> std::size_t {
    const Node& n = node(id);
    return n.leaf ? 1 : rec(n.left) + rec(n.right);
  };
  return rec(root_);
}

void KFoldTree::validate(int k, int arity, int width, int codomain) const {
  if (root_ < 0) throw Error(ErrorKind::MalformedTree, "tree has no root");
  std::vector<int> seen(nodes_.size(), 0);
  std::function<void(int)> rec = [&](int id) {
    if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size())
      throw Error(ErrorKind::MalformedTree, "dangling child reference");
    if (seen[static_cast<std::size_t>(id)]++)
      throw Error(ErrorKind::MalformedTree, "node shared between paths");
    const Node& n = node(id);
    if (n.leaf) {
      if (static_cast<int>(n.outputs.size()) != width)
        throw Error(ErrorKind::MalformedTree, "leaf has " + std::to_string(n.outputs.size()) +
                                                  " outputs, expected " + std::to_string(width));
      for (std::uint32_t b : n.outputs)
        if (b >= static_cast<std::uint32_t>(codomain))
          throw Error(ErrorKind::MalformedTree, "leaf output outside codomain");
      return;
    }
    if (n.instance < 0 || n.instance >= k)
      throw Error(ErrorKind::MalformedTree, "query names instance " + std::to_string(n.instance + 1));
    if (n.index < 0 || n.index >= arity)
      throw Error(ErrorKind::MalformedTree, "query names index " + std::to_string(n.index + 1));
    rec(n.left);
    rec(n.right);
  };
  rec(root_);
}

int KFoldTree::leaf_for(std::span<const std::uint32_t> inputs, int arity) const {
  int id = root_;
  while (!node(id).leaf) {
    const Node& n = node(id);
    const bool one = (inputs[static_cast<std::size_t>(n.instance)] & variable_bit(arity, n.index)) != 0;
    id = one ? n.right : n.left;
  }
  return id;
}

namespace {

class TreeParser {
 public:
  explicit TreeParser(std::string_view text) : text_(text) {}

  KFoldTree run() {
    KFoldTree tree;
    const int root = node(tree);
    skip_space();
    if (pos_ != text_.size()) fail("trailing text after tree");
    tree.set_root(root);
    return tree;
  }

 private:
  int node(KFoldTree& tree) {
    expect('(');
    const std::string head = word();
    int id = -1;
    if (head == "q") {
      const long j = number();
      const long i = number();
      if (j < 1 || i < 1) fail("indices are 1-based");
      const int left = node(tree);
      const int right = node(tree);
      id = tree.add_query(static_cast<int>(j - 1), static_cast<int>(i - 1), left, right);
    } else if (head == "leaf") {
      std::vector<std::uint32_t> outputs;
      skip_space();
      while (pos_ < text_.size() && text_[pos_] != ')') {
        const long b = number();
        if (b < 0) fail("negative output symbol");
        outputs.push_back(static_cast<std::uint32_t>(b));
        skip_space();
      }
      if (outputs.empty()) fail("leaf without outputs");
      id = tree.add_leaf(std::move(outputs));
    } else {
      fail("expected 'q' or 'leaf', got '" + head + "'");
    }
    expect(')');
    return id;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  std::string word() {
    skip_space();
    std::string out;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      out += text_[pos_];
      advance();
    }
    return out;
  }

  long number() {
    skip_space();
    std::string digits;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      digits += '-';
      advance();
    }
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      digits += text_[pos_];
      advance();
    }
    if (digits.empty() || digits == "-") fail("expected a number");
    return std::stol(digits);
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_, column_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

KFoldTree KFoldTree::parse(std::string_view text) { return TreeParser(text).run(); }

std::string KFoldTree::to_string() const {
  if (root_ < 0) return "";
  std::string out;
  std::function<void(int)> rec = [&](int id) {
    const Node& n = node(id);
    if (n.leaf) {
      out += "(leaf";
      for (std::uint32_t b : n.outputs) out += " " + std::to_string(b);
      out += ")";
      return;
    }
    out += "(q " + std::to_string(n.instance + 1) + " " + std::to_string(n.index + 1) + " ";
    rec(n.left);
    out += " ";
    rec(n.right);
    out += ")";
  };
  rec(root_);
  return out;
}

}  // namespace dptlab
