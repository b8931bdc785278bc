/* Lists the NSWs in a sentence and its frequency vector width.
 *
 *   cargo build --release -p nswcat-ffi
 *   cc crates/ffi/examples/demo.c -Icrates/ffi/include \
 *      target/release/libnswcat_ffi.a -lpthread -ldl -lm -o demo
 */
#include <stdio.h>
#include <stdlib.h>

#include "nswcat.h"

int main(int argc, char **argv) {
    const char *text = argc > 1 ? argv[1] : "Dr. Ivić stiže 15. 10. 2023. u 14:30.";
    NswLexerHandle *lexer = NULL;
    if (nsw_lexer_new_default(&lexer) != NSW_STATUS_OK) {
        fprintf(stderr, "%s\n", nsw_last_error());
        return 1;
    }

    size_t n = 0;
    NswStatus st = nsw_lexer_extract(lexer, text, NULL, 0, &n);
    if (st != NSW_STATUS_OK && st != NSW_STATUS_BUFFER_TOO_SMALL) {
        fprintf(stderr, "%s\n", nsw_last_error());
        nsw_lexer_free(lexer);
        return 1;
    }
    NswSpan *spans = calloc(n ? n : 1, sizeof *spans);
    nsw_lexer_extract(lexer, text, spans, n, &n);
    for (size_t i = 0; i < n; i++) {
        printf("%.*s\t%s\n", (int)(spans[i].end - spans[i].start), text + spans[i].start,
               nsw_lexer_type_name(lexer, spans[i].type_id));
    }

    double features[110];
    size_t width = 0;
    nsw_lexer_features(lexer, text, NSW_REP_UNION, features, 110, &width);
    printf("union width %zu, total NSWs %g\n", width, features[59]);

    free(spans);
    nsw_lexer_free(lexer);
    return 0;
}
