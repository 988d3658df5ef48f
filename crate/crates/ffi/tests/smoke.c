#include <math.h>
#include <stdio.h>
#include <string.h>

#include "achievement.h"

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "line %d: %s\n", __LINE__, #cond);         \
      return 1;                                                  \
    }                                                            \
  } while (0)

int main(void) {
  AgGame *game = NULL;
  CHECK(ag_standard_game("AB", 2, NULL, &game) == AG_STATUS_OK);

  uint64_t count = 0;
  CHECK(ag_game_equilibrium_count(game, &count) == AG_STATUS_OK);
  CHECK(count == 1);

  AgScores scores;
  CHECK(ag_game_scores(game, "1/4", &scores) == AG_STATUS_OK);
  CHECK(scores.defined && scores.mga == 1.0 && scores.vl == 0.75);

  char *dd = NULL;
  CHECK(ag_game_score_exact(game, AG_SCORE_DD, NULL, &dd) == AG_STATUS_OK);
  CHECK(strcmp(dd, "1/2") == 0);
  ag_string_free(dd);

  AgGame *bad = NULL;
  CHECK(ag_game_from_json("{\"agents\": 1/0}", &bad) == AG_STATUS_PARSE);
  CHECK(bad == NULL && ag_last_error_message() != NULL);

  ag_game_free(game);
  printf("ok %s\n", ag_version());
  return 0;
}
