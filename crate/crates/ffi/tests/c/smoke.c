#include <math.h>
#include <stdio.h>
#include <string.h>

#include "acm.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    AcmManifold *m = NULL;
    AcmCurve *c = NULL;
    CHECK(acm_manifold_builtin("exp_warped", &m) == ACM_STATUS_OK);
    CHECK(acm_curve_builtin("exp_log", &c) == ACM_STATUS_OK);

    double residual = -1.0;
    bool holds = false;
    CHECK(acm_manifold_verify(m, 10, 2755, 1e-8, &residual, &holds) == ACM_STATUS_OK);
    CHECK(holds && residual < 1e-8);

    double p[3] = {0.3, -0.2, 1.0};
    double alpha, beta, fit;
    CHECK(acm_classify_at(m, p, &alpha, &beta, &fit) == ACM_STATUS_OK);
    CHECK(fabs(alpha + exp(-1.0) / 2.0) < 1e-10 && fabs(beta - 0.5) < 1e-10);

    AcmFrenet f;
    CHECK(acm_frenet(m, c, 2.0, &f) == ACM_STATUS_OK);
    CHECK(fabs(f.kappa - 0.5) < 1e-10 && fabs(f.tau - 0.125) < 1e-10);
    CHECK(f.normal_defined && f.binormal_defined);

    double eta;
    CHECK(acm_is_almost_contact(m, c, 1e-12, &eta, &holds) == ACM_STATUS_OK && holds);

    double value;
    CHECK(acm_sigma_first_integral(0.0, 0.0, &value) == ACM_STATUS_OK && value == 1.0);

    AcmCurve *bad = NULL;
    const char *src = "{\"domain\": [0, 1], \"samples\": 5, \"components\": [\"t\", \"(t\", \"0\"]}";
    CHECK(acm_curve_from_json(src, &bad) == ACM_STATUS_INVALID_INPUT);
    CHECK(bad == NULL);
    CHECK(acm_last_error_offset() == 2);
    CHECK(strstr(acm_last_error_message(), "components[1]") != NULL);

    acm_curve_free(c);
    acm_manifold_free(m);
    puts("ok");
    return 0;
}
