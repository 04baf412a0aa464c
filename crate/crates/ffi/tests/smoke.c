#include <stdio.h>
#include <string.h>

#include "dessin.h"

static int expect(const char *label, DessinStatus status, char *value, const char *want) {
    int ok = status == DESSIN_STATUS_OK && strcmp(value, want) == 0;
    printf("%s %s\n", label, ok ? value : dessin_status_message(status));
    dessin_string_free(value);
    return ok ? 0 : 1;
}

int main(void) {
    DessinEngine *engine = NULL;
    DessinStatus status;
    char *s = NULL;
    int failures = 0;

    if (dessin_engine_new(14, &engine) != DESSIN_STATUS_OK) {
        return 2;
    }
    status = dessin_engine_marked(engine, 14, 4, &s);
    failures += expect("marked(14,4)", status, s, "344901105444");
    s = NULL;
    status = dessin_engine_coefficient(engine, 2, 1, "2^1", &s);
    failures += expect("coefficient(2,1,2^1)", status, s, "1/2");
    s = NULL;
    status = dessin_closed_genus1(14, &s);
    failures += expect("closed_genus1(14)", status, s, "47168678571");

    s = NULL;
    if (dessin_engine_marked(engine, 20, 0, &s) != DESSIN_STATUS_OUT_OF_RANGE || s != NULL) {
        failures++;
    }
    dessin_engine_free(engine);
    return failures;
}
