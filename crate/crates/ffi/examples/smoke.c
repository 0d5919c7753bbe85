#include <stdio.h>
#include <string.h>

#include "transcend.h"

static int fail(const char *what, TrStatus st) {
    const char *msg = tr_last_error();
    fprintf(stderr, "%s: status %d: %s\n", what, (int)st, msg ? msg : "(none)");
    return 1;
}

int main(void) {
    TrSeries *s = NULL;
    char *out = NULL;
    TrStatus st = tr_series_new("{\"family\":\"power\",\"a1\":\"2\",\"e\":\"4\"}", 0, &s);
    if (st != TR_OK) return fail("new", st);

    st = tr_series_term(s, 3, &out);
    if (st != TR_OK) return fail("term", st);
    printf("%s\n", out);
    tr_string_free(out);

    st = tr_series_certify(s, "5/2", 1, 3, &out);
    if (st != TR_OK) return fail("certify", st);
    if (strstr(out, "\"verified\": true") == NULL) return 1;
    tr_string_free(out);

    st = tr_series_certify(s, "2", 1, 3, &out);
    if (st != TR_ALPHA_TOO_SMALL || tr_last_error() == NULL) return 1;
    printf("%s\n", tr_last_error());

    tr_series_free(s);
    return 0;
}
