#include "irenergy/analysis/analysis.hpp"
#include "irenergy/support/error.hpp"

#include <algorithm>
#include <functional>

namespace irenergy::analysis {

std::set<std::string> CallGraph::callees(const std::string& pred) const {
  std::set<std::string> out;
  for (const auto& e : edges)
    if (e.caller == pred)
      out.insert(e.callee);
  return out;
}

bool CallGraph::recursive(const std::string& pred) const {
  auto it = scc_of.find(pred);
  if (it == scc_of.end())
    return false;
  if (sccs[it->second].size() > 1)
    return true;
  return callees(pred).count(pred) > 0;
}

std::vector<std::vector<std::string>> strongly_connected(
    const std::vector<std::string>& nodes, const std::map<std::string, std::set<std::string>>& succ) {
  std::vector<std::vector<std::string>> out;
  std::map<std::string, int> index, low;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  int counter = 0;
  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    if (auto it = succ.find(v); it != succ.end()) {
      for (const auto& w : it->second) {
        if (!index.count(w)) {
          visit(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack.count(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> scc;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        scc.push_back(w);
      } while (w != v);
      std::sort(scc.begin(), scc.end());
      out.push_back(std::move(scc));
    }
  };
  for (const auto& n : nodes)
    if (!index.count(n))
      visit(n);
  return out;
}

CallGraph build_call_graph(const hcir::HCProgram& p) {
  CallGraph g;
  std::set<std::string> nodes;
  for (const auto& [name, sig] : p.preds)
    nodes.insert(name);
  for (const auto& c : p.clauses)
    nodes.insert(c.pred);

  std::map<std::string, std::set<std::string>> succ;
  for (std::size_t ci = 0; ci < p.clauses.size(); ++ci) {
    const auto& c = p.clauses[ci];
    for (std::size_t li = 0; li < c.body.size(); ++li) {
      const auto& l = c.body[li];
      if (l.kind != hcir::Literal::Kind::Call)
        continue;
      bool defined = !p.clauses_of(l.name).empty();
      if (!defined && !p.find_assertion(l.name, l.args.size()))
        throw Error("analysis", "call to unknown predicate " + l.name + "/" +
                                    std::to_string(l.args.size()) + " in " + c.pred);
      nodes.insert(l.name);
      g.edges.push_back({c.pred, l.name, ci, li});
      succ[c.pred].insert(l.name);
    }
  }
  g.nodes.assign(nodes.begin(), nodes.end());
  g.sccs = strongly_connected(g.nodes, succ);
  for (std::size_t i = 0; i < g.sccs.size(); ++i)
    for (const auto& m : g.sccs[i])
      g.scc_of[m] = i;
  return g;
}

} // namespace irenergy::analysis
