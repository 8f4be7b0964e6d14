#include <math.h>
#include <stdio.h>
#include "qspeed.h"

int main(void) {
    double a[2] = {1.0, 0.0};
    double b[2] = {0.0, 1.0};
    QspeedState *ra = NULL, *rb = NULL;
    if (qspeed_state_diagonal(2, a, &ra) != QSPEED_STATUS_OK) return 10;
    if (qspeed_state_diagonal(2, b, &rb) != QSPEED_STATUS_OK) return 11;
    double d = 0.0;
    if (qspeed_distance_alpha(ra, rb, 1.0, &d) != QSPEED_STATUS_OK) return 12;
    if (fabs(d - 3.141592653589793) > 1e-12) return 13;
    if (qspeed_distance_alpha(ra, rb, 5.0, &d) != QSPEED_STATUS_INVALID_INPUT) return 14;
    if (qspeed_last_error() == NULL) return 15;
    printf("%s %.12f\n", qspeed_version(), d);
    qspeed_state_free(ra);
    qspeed_state_free(rb);
    return 0;
}
