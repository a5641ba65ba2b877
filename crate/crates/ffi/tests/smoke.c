#include "osgrp.h"
#include <math.h>
#include <stdio.h>

int main(void) {
    OsgrpPrim l = {1.0, 0.0, 1.0}, r = {0.125, 0.0, 0.1};
    OsgrpStar star;
    if (osgrp_solve_riemann(1.4, &l, &r, &star) != OSGRP_STATUS_OK) return 1;
    if (fabs(star.p - 0.30313017805064707) > 1e-12) return 2;

    OsgrpSolver *s = NULL;
    if (osgrp_solver_from_case("shock-wall", 40, OSGRP_BC_MODE_ONE_SIDED_GRP, &s) != OSGRP_STATUS_OK) return 3;
    if (osgrp_solver_advance(s, 0.1) != OSGRP_STATUS_OK) return 4;
    size_t nx, ny;
    osgrp_solver_shape(s, &nx, &ny);
    double rho[40];
    if (nx * ny != 40 || osgrp_solver_copy_field(s, OSGRP_FIELD_DENSITY, rho, 40) != OSGRP_STATUS_OK) return 5;
    osgrp_solver_free(s);

    if (osgrp_solver_from_case("nope", 0, OSGRP_BC_MODE_ONE_SIDED_GRP, &s) != OSGRP_STATUS_UNKNOWN_CASE || s != NULL) return 6;
    char msg[128];
    osgrp_last_error(msg, sizeof msg);
    printf("%s %.6f %s\n", osgrp_version(), rho[0], msg);
    return 0;
}
