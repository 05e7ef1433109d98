// Canonical subsets of random equivalence relations: constructive pipeline against exhaustive search.
#include <iostream>

#include "canon/canonical_eq.hpp"
#include "canon/erdos_rado.hpp"
#include "canon/oracle.hpp"

int main(int argc, char** argv)
{
  using namespace canon;
  const std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 1;
  for (std::uint64_t t = 0; t < 5; ++t) {
    Equivalence e = random_equivalence(2, 12, 2, seed + t);
    auto exact = search_canonical_eq_subset(e, 4);
    auto res = er_pipeline(e, 3);
    std::cout << exact.line() << "\n  pipeline: ";
    if (res.ok()) std::cout << res.set->size() << " elements, " << res.index->str() << "\n";
    else std::cout << "failed at " << res.failed_stage << "\n";
  }
  Equivalence c = canonical_eq(3, 60, IndexSet::parse(3, "I=1,3"));
  auto res = er_pipeline(c, 5);
  std::cout << res.transcript.str();
  if (res.ok()) std::cout << "canonical input: " << res.index->str() << "\n";
}
