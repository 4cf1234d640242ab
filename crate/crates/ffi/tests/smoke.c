#include <stdio.h>
#include <string.h>
#include "solidangle.h"

#define CHECK(x) do { if ((x) != SA_OK) { fprintf(stderr, "%s: %s\n", #x, sa_last_error()); return 1; } } while (0)

int main(void) {
    SaPolytope *p = NULL;
    SaEngine *e = NULL;
    CHECK(sa_polytope_from_json("{\"vertices\":[[0,0,0],[1,0,0],[0,1,0],[1,1,12]]}", &p));
    CHECK(sa_engine_new(SA_POLICY_EXACT, 1000000, 0, &e));
    int64_t h[4];
    CHECK(sa_hstar(p, h, 4));
    double c[4], err[4];
    CHECK(sa_solid_polynomial(p, e, c, err, 4));
    uint64_t n = 0;
    CHECK(sa_ehrhart_count(p, 1, &n));
    printf("%lld %lld %lld %lld %.6f %.6f %llu\n", (long long)h[0], (long long)h[1], (long long)h[2],
           (long long)h[3], c[1], c[3], (unsigned long long)n);
    if (sa_hstar(p, h, 2) != SA_BUFFER_TOO_SMALL || strlen(sa_last_error()) == 0) return 2;
    sa_engine_free(e);
    sa_polytope_free(p);
    return 0;
}
