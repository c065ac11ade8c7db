#include <stdio.h>
#include <string.h>
#include "tableaux.h"

static const char *DOC =
    "{\"r\": 3, \"n\": 3, \"presentation\": \"coefficients\", \"characters\": [3, 1, 0],"
    " \"coefficients\": [{\"a\": 2, \"lambda\": 1, \"i\": 2, \"b\": 3, \"value\": \"1\"},"
    " {\"a\": 2, \"lambda\": 1, \"i\": 3, \"b\": 2, \"value\": \"1\"},"
    " {\"a\": 3, \"lambda\": 1, \"i\": 3, \"b\": 3, \"value\": \"1\"}]}";

int main(void) {
    struct TableauxTableau *t = NULL;
    struct TableauxReport *rep = NULL;
    if (tableaux_tableau_from_json(DOC, &t) != TABLEAUX_STATUS_OK) return 1;
    if (tableaux_cartan_test(t, 0, 0, TABLEAUX_VARIANT_THEOREM, &rep) != TABLEAUX_STATUS_OK) return 2;
    bool involutive = false;
    size_t dim_a1 = 0, bound = 0, chars[3], len = 3;
    tableaux_report_summary(rep, &involutive, &dim_a1, &bound, NULL, NULL);
    tableaux_report_characters(rep, chars, &len);
    printf("involutive=%d dim_a1=%zu bound=%zu chars=%zu,%zu,%zu\n", involutive, dim_a1, bound, chars[0], chars[1], chars[2]);
    struct TableauxTableau *bad = NULL;
    if (tableaux_tableau_from_json("{", &bad) != TABLEAUX_STATUS_INVALID_DOCUMENT) return 3;
    if (strlen(tableaux_last_error()) == 0) return 4;
    tableaux_report_free(rep);
    tableaux_tableau_free(t);
    return 0;
}
