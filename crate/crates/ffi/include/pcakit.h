#ifndef PCAKIT_H
#define PCAKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum PcakitStatus {
  PCAKIT_OK = 0,
  PCAKIT_NULL_ARGUMENT = 1,
  PCAKIT_INVALID_UTF8 = 2,
  PCAKIT_PARSE = 3,
  PCAKIT_INPUT = 4,
  PCAKIT_UNSUPPORTED = 5,
  PCAKIT_CONSTRUCTION = 6,
  PCAKIT_INTERNAL = 7,
} PcakitStatus;

/**
 * Any automaton read from the composite file format.
 */
typedef struct PcakitAutomaton PcakitAutomaton;

/**
 * A class condition over `Γ × {0,1}`.
 */
typedef struct PcakitCondition PcakitCondition;

/**
 * An explicit counter machine.
 */
typedef struct PcakitMachine PcakitMachine;

/**
 * A parsed array program.
 */
typedef struct PcakitProgram PcakitProgram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread; empty after a success.
 */
const char *pcakit_last_error(void);

/**
 * Library version, static storage.
 */
const char *pcakit_version(void);

void pcakit_string_free(char *s);

PcakitStatus pcakit_condition_parse(const char *src, PcakitCondition **out);

void pcakit_condition_free(PcakitCondition *c);

/**
 * Writes the verdict to `zero_priority` and, if `report` is non-null, the
 * text report (`structured` non-zero for JSON).
 */
PcakitStatus pcakit_condition_check_priority(const PcakitCondition *c,
                                             int32_t structured,
                                             bool *zero_priority,
                                             char **report);

PcakitStatus pcakit_automaton_parse(const char *src, PcakitAutomaton **out);

void pcakit_automaton_free(PcakitAutomaton *a);

/**
 * Membership of one data word given as `a:1 b:2 a:1`.
 */
PcakitStatus pcakit_automaton_accepts(const PcakitAutomaton *a, const char *word, bool *accepted);

/**
 * Compiles to a priority multicounter machine. Class conditions must be
 * 0-priority; otherwise `PCAKIT_CONSTRUCTION`.
 */
PcakitStatus pcakit_automaton_compile(const PcakitAutomaton *a, PcakitMachine **out);

PcakitStatus pcakit_machine_parse(const char *src, PcakitMachine **out);

void pcakit_machine_free(PcakitMachine *m);

uintptr_t pcakit_machine_counters(const PcakitMachine *m);

/**
 * True iff every zero test is a prefix test.
 */
bool pcakit_machine_is_priority(const PcakitMachine *m);

PcakitStatus pcakit_machine_to_text(const PcakitMachine *m, char **out);

/**
 * Bounded exploration. `words` receives the accepted words, one per line
 * with letters separated by spaces; `exact` is false when the sum or step
 * bound cut the search.
 */
PcakitStatus pcakit_machine_explore(const PcakitMachine *m,
                                    uintptr_t max_len,
                                    uint64_t sum_bound,
                                    uintptr_t steps,
                                    char **words,
                                    bool *exact);

PcakitStatus pcakit_program_parse(const char *src, PcakitProgram **out);

void pcakit_program_free(PcakitProgram *p);

/**
 * Bounded reachability of a full Boolean target such as
 * `b1=true b2=false`. `witness` receives the least array reaching it, or
 * NULL when none of length at most `max_len` does.
 */
PcakitStatus pcakit_program_reachable(const PcakitProgram *p,
                                      const char *target,
                                      uintptr_t max_len,
                                      char **witness,
                                      bool *truncated);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PCAKIT_H */
