"""Adaptive genetic algorithm over explicit source-to-destination paths."""

from .chromosome import Chromosome, Evaluator
from .encoding import PriorityChromosome, decode_priority
from .engine import (GaConfig, GenerationReport, breed, dump_trace, evolve, load_trace,
                     method_summary, rng_stream)
from .operators import (crossover, crossover_at, initial_population, mutate, mutate_at, random_path,
                        remove_loops, shortest_hop_path)
from .selection import (METHODS, SelectionParams, boltzmann_temperature, fitness_of,
                        select_indices, select_pair, selection_probabilities)

__all__ = [
    "Chromosome", "Evaluator", "PriorityChromosome", "decode_priority", "GaConfig",
    "GenerationReport", "breed", "dump_trace", "evolve", "load_trace", "method_summary",
    "rng_stream", "crossover", "crossover_at", "initial_population", "mutate", "mutate_at", "random_path",
    "remove_loops", "shortest_hop_path", "METHODS", "SelectionParams",
    "boltzmann_temperature", "fitness_of", "select_indices", "select_pair",
    "selection_probabilities",
]
