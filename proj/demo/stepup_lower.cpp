// A pair ordering on [32] with no canonical 4-subset, stepped up from a triangle-free 2-colouring of [5]^(2).
#include <iostream>

#include "canon/oracle.hpp"
#include "canon/steppingup.hpp"

int main()
{
  using namespace canon;
  auto g = find_witness_colouring(5, 3);
  std::cout << "colouring of [5]^(2): " << g->str() << "\n";
  Ordering o = build_pair_ordering(5, *g);
  auto best = max_canonical_subset(o);
  std::cout << best.line() << "\n";
  auto four = search_canonical_subset(o, 4);
  std::cout << "canonical 4-subset: " << (four.found == Found::Yes ? "found" : "none") << "\n";
}
