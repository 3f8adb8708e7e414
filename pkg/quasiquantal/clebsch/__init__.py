from .classes import (ClassSolution, enumerate_class_solutions, regular_solution, variable_count,
                      parity_check, class_table, variable_count_sequence, is_regular_sequence,
                      SEQUENCE_RULES)
