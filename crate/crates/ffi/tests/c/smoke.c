#include <stdio.h>
#include <string.h>
#include "gmk.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s\n", #cond); return 1; } } while (0)

int main(void) {
    GmkPhi *phi = NULL;
    CHECK(gmk_phi_new(2, 2, false, &phi) == GMK_STATUS_OK);
    uint64_t len = 0;
    CHECK(gmk_phi_iterate_length(phi, 3, 3, &len) == GMK_STATUS_OK);
    CHECK(len == 19);
    char *word = NULL;
    CHECK(gmk_phi_iterate_word(phi, "B1", 1, &word) == GMK_STATUS_OK);
    CHECK(strcmp(word, "A1 A2 B1") == 0);
    gmk_string_free(word);
    CHECK(gmk_phi_iterate_word(phi, "C9", 1, &word) == GMK_STATUS_PARSE);
    CHECK(gmk_last_error_message() != NULL);
    gmk_phi_free(phi);

    GmkAction *action = NULL;
    CHECK(gmk_action_new(2, &action) == GMK_STATUS_OK);
    CHECK(gmk_action_point_count(action) == 32);
    bool ok = false;
    CHECK(gmk_action_verify(action, &ok) == GMK_STATUS_OK && ok);
    gmk_action_free(action);

    bool trivial = false;
    CHECK(gmk_bieri_is_trivial(1, 1, "s t^-1 t B1 t^-1 t s^-1 t B1^-1 t^-1", &trivial) == GMK_STATUS_OK);
    CHECK(trivial);
    puts("ok");
    return 0;
}
