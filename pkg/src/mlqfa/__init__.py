"""Multi-letter quantum finite automata: simulation, equivalence and cut-point languages."""
