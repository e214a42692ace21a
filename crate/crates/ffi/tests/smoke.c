#include <math.h>
#include <stdio.h>
#include <string.h>

#include "qdomain.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond,    \
                    qd_last_error() ? qd_last_error() : "no error");  \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    QdTNorm *luk = NULL;
    double v = -1.0;
    CHECK(qd_tnorm_builtin("lukasiewicz", &luk) == QD_STATUS_OK);
    CHECK(qd_tnorm_conj(luk, 0.75, 0.5, &v) == QD_STATUS_OK && fabs(v - 0.25) < 1e-12);
    CHECK(qd_tnorm_residuum(luk, 0.75, 0.5, &v) == QD_STATUS_OK && fabs(v - 0.75) < 1e-12);
    CHECK(qd_tnorm_conj(luk, 1.5, 0.5, &v) == QD_STATUS_OUT_OF_RANGE);
    CHECK(qd_last_error() != NULL);

    char *cert = NULL;
    int valid = 0;
    CHECK(qd_classify_injectivity(luk, 20, 1e-9, &cert) == QD_STATUS_OK);
    CHECK(strstr(cert, "injective-all-continuous-lattices") != NULL);
    CHECK(qd_verify_certificate(cert, 1e-9, &valid) == QD_STATUS_OK && valid == 1);
    qd_string_free(cert);
    qd_tnorm_free(luk);

    QdOrder *x = NULL;
    const char *chain =
        "{\"tnorm\": {\"pieces\": []}, \"elements\": [\"a\", \"b\"],"
        " \"alpha\": [[1, 1], [0.5, 1]]}";
    size_t n = 0;
    double w[4];
    CHECK(qd_order_from_json(chain, &x) == QD_STATUS_OK);
    CHECK(qd_order_len(x, &n) == QD_STATUS_OK && n == 2);
    CHECK(qd_order_way_below(x, w, 3) == QD_STATUS_BUFFER_TOO_SMALL);
    CHECK(qd_order_way_below(x, w, 4) == QD_STATUS_OK && w[2] == 0.5);
    qd_order_free(x);

    CHECK(qd_order_from_json("{", &x) == QD_STATUS_PARSE);

    const char *argv[] = {"check-tnorm", "--spec", "product", "--grid", "20"};
    char *report = NULL;
    int code = -1;
    CHECK(qd_run(argv, 5, &report, &code) == QD_STATUS_OK && code == 0);
    CHECK(strncmp(report, "check-tnorm: pass", 17) == 0);
    qd_string_free(report);

    printf("ok %s\n", qd_version());
    return 0;
}
