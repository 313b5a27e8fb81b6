/* cc examples/demo.c -Iinclude -L../../target/release -l:libggf_ffi.a -lm -lpthread -ldl -o demo */
#include <stdio.h>
#include "ggf.h"

int main(void) {
    GgfSystem *sys = NULL;
    if (ggf_system_parse("vars: a b\na >= b/2 >= 0\n", &sys) != GGF_STATUS_OK) {
        fprintf(stderr, "%s\n", ggf_last_error());
        return 1;
    }
    GgfGf *gf = NULL;
    if (ggf_solve(sys, 0, &gf) != GGF_STATUS_OK) {
        fprintf(stderr, "%s\n", ggf_last_error());
        return 1;
    }
    char *text = NULL;
    ggf_gf_render(gf, &text);
    printf("%s", text);
    ggf_string_free(text);

    GgfSeries *s = NULL;
    ggf_gf_expand(gf, 8, &s);
    for (size_t i = 0; i < ggf_series_len(s); i++) {
        int64_t c = 0;
        ggf_series_coeff_i64(s, i, &c);
        printf("%lld ", (long long)c);
    }
    printf("\n");
    ggf_series_free(s);
    ggf_gf_free(gf);
    ggf_system_free(sys);
    return 0;
}
