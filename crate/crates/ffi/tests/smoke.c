#include <stdio.h>
#include <string.h>

#include "parahiggs.h"

int main(void) {
    const char *json =
        "{\"schema_version\": 1, \"id\": \"j3\", \"kind\": \"weight_filtration\","
        " \"payload\": {\"matrix\": [[\"0\",\"1\",\"0\"],[\"0\",\"0\",\"1\"],[\"0\",\"0\",\"0\"]]}}";
    PhScenario *s = NULL;
    if (ph_scenario_parse(json, &s) != PH_OK) {
        fprintf(stderr, "parse: %s\n", ph_last_error());
        return 10;
    }
    PhReport *r = NULL;
    int32_t status = -1;
    if (ph_run(s, &r) != PH_OK || ph_report_status(r, &status) != PH_OK || status != 0) {
        return 11;
    }
    char *text = NULL;
    if (ph_report_render(r, true, &text) != PH_OK || strstr(text, "status: pass") == NULL) {
        return 12;
    }
    ph_string_free(text);
    ph_report_free(r);
    ph_scenario_free(s);

    int64_t n[4] = {1, 0, 0, 1};
    size_t dims[3];
    if (ph_weight_graded_dims(2, n, dims, 3) != PH_ERR_COMPUTATION) {
        return 13;
    }
    if (ph_scenario_parse("{", &s) != PH_ERR_PARSE) {
        return 14;
    }
    puts("ok");
    return 0;
}
