// SPDX-License-Identifier: Apache-2.0
#include "crossflow/strategy.hpp"

#include <cctype>
#include <sstream>

#include "crossflow/errors.hpp"

namespace crossflow {

namespace {

// Tiny cursor over the strategy string; errors carry the position.
struct Cursor {
  const std::string& s;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("strategy", "`" + s + "` at position " +
                                      std::to_string(pos) + ": " + msg);
  }

  void expect(char c) {
    if (pos >= s.size() || s[pos] != c) {
      fail(std::string("expected `") + c + "`");
    }
    ++pos;
  }

  int read_int() {
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected an integer");
    long v = std::stol(s.substr(start, pos - start));
    if (v < 1) fail("counts must be >= 1");
    return static_cast<int>(v);
  }

  bool done() const { return pos == s.size(); }
};

}  // namespace

ParallelismStrategy parse_strategy(const std::string& text) {
  Cursor cur{text};
  if (text.size() < 2) cur.fail("expected RC or CR prefix");
  char a = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  char b = static_cast<char>(std::toupper(static_cast<unsigned char>(text[1])));

  ParallelismStrategy st;
  if (a == 'R' && b == 'C') {
    st.kind = KernelKind::kRC;
  } else if (a == 'C' && b == 'R') {
    st.kind = KernelKind::kCR;
  } else {
    cur.fail("expected RC or CR prefix");
  }
  cur.pos = 2;

  cur.expect('-');
  st.kp1 = cur.read_int();
  if (st.kind == KernelKind::kRC) {
    cur.expect('-');
    st.kp2 = cur.read_int();
  } else {
    st.kp2 = 1;
  }
  cur.expect('-');
  cur.expect('d');
  st.dp = cur.read_int();
  cur.expect('-');
  cur.expect('p');
  st.lp = cur.read_int();
  if (!cur.done()) cur.fail("trailing characters");
  return st;
}

std::string ParallelismStrategy::to_string() const {
  std::ostringstream out;
  if (kind == KernelKind::kRC) {
    out << "RC-" << kp1 << "-" << kp2;
  } else {
    out << "CR-" << kp1;
  }
  out << "-d" << dp << "-p" << lp;
  return out.str();
}

}  // namespace crossflow
