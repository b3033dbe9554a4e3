#include "ltccp/parallel.hpp"

#ifdef LTCCP_HAVE_OPENMP
#include <omp.h>
#endif

namespace ltccp {

int max_threads() {
#ifdef LTCCP_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace ltccp
