#include "prs/parallel.hpp"

namespace prs {

int effective_threads(int requested) {
#ifdef _OPENMP
  if (requested > 0) return requested;
  return omp_get_max_threads();
#else
  (void)requested;
  return 1;
#endif
}

}  // namespace prs
