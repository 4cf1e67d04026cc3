"""Type isomorphisms for a higher-order language with references.

The package decides when two types are isomorphic, produces term-level
coercions witnessing it, and independently verifies the answer in a game
model: types become arena families, programs become strategies, and an
isomorphism becomes a pair of strategies composing to copycat, from which a
move-level path isomorphism can be extracted back.

Layers, bottom to top:

- `syntax`    types, terms, parsing, printing, type checking
- `interp`    small-step evaluation and observational tests
- `isotheory` type normal forms, the isomorphism decision, coercion synthesis
- `arena`     arenas, arena families, depth-bounded tree isomorphisms
- `plays`     justified sequences and their legality predicates
- `strategy`  strategies, composition, copycat, the example strategies
- `extract`   between strategies and sequence morphisms; slicing; extraction
- `fixtures`  curated end-to-end examples and random-context batteries
- `cli`       the `gamiso` command
"""

from .arena import (Arena, ArenaError, KIso, PathIso, arena_to_dot,
                    arena_to_json, family_iso_decide,
                    interpret_type, k_iso, kiso_valid, path_iso_decide,
                    reachable_moves, rename_moves)
from .extract import (ExtractError, PathMorphism, SeqMorphism,
                      extend_path_morphism, extract_k_iso, extract_path_iso,
                      find_nonfunctorial_witness, path_morphism_from_iso,
                      rename_strategy, restrict_to_paths,
                      seq_morphism_to_strategy, slice_iso,
                      strategy_to_seq_morphism)
from .interp import (ContextTemplate, EvalResult, converges, evaluate,
                     observational_test)
from .isotheory import (NormalForm, enumerate_types, iso_decide, nf_type,
                        normalize, synthesize_coercions)
from .plays import (dual_play, extensions, is_alternating, is_justified,
                    is_legal, is_pre_legal, is_pre_zigzag, is_well_bracketed,
                    is_zigzag, play_from_json, play_to_json, q_count,
                    restrict, threads)
from .strategy import (Strategy, StrategyError, cell, compose, copycat,
                       equals_up_to, involution_arena, involution_i,
                       is_innocent, is_single_threaded, is_strategy,
                       is_visible, prop4_strategies, strategy_to_json)
from .syntax import (ParseError, TermExpr, TypeCheckError, TypeExpr,
                     TypingContext, parse_term, parse_type, term_to_str,
                     type_to_str, typecheck)

__version__ = "0.1.0"

__all__ = [
    "Arena", "ArenaError", "ContextTemplate", "EvalResult", "ExtractError",
    "KIso", "NormalForm", "ParseError", "PathIso", "PathMorphism",
    "SeqMorphism", "Strategy", "StrategyError", "TermExpr", "TypeCheckError",
    "TypeExpr", "TypingContext", "arena_to_dot", "arena_to_json", "cell",
    "compose", "converges", "copycat", "dual_play",
    "enumerate_types", "equals_up_to", "evaluate", "extend_path_morphism",
    "extensions", "extract_k_iso", "extract_path_iso", "family_iso_decide",
    "find_nonfunctorial_witness", "interpret_type", "involution_arena",
    "involution_i", "is_alternating", "is_innocent", "is_justified",
    "is_legal", "is_pre_legal", "is_pre_zigzag", "is_single_threaded",
    "is_strategy", "is_visible", "is_well_bracketed", "is_zigzag",
    "iso_decide", "k_iso", "kiso_valid", "nf_type", "normalize",
    "observational_test", "parse_term", "parse_type", "path_iso_decide",
    "path_morphism_from_iso", "play_from_json", "play_to_json",
    "prop4_strategies", "q_count", "reachable_moves", "rename_moves",
    "rename_strategy",
    "restrict", "restrict_to_paths", "seq_morphism_to_strategy", "slice_iso",
    "strategy_to_json", "strategy_to_seq_morphism", "synthesize_coercions",
    "term_to_str", "threads", "type_to_str", "typecheck",
]
