"""Exact-arithmetic canonical forms and complexity reductions for matrix
problems: pencils, spatial matrices, quiver and poset representations,
wildness encoders, and brute-force equivalence oracles."""

from .errors import (BudgetExceeded, FieldMismatch, FieldTooSmall,
                     InfiniteField, InternalCheckFailed, NonSplitSpectrum,
                     NonSquare, NotAChain, NotCube, NotInvertible, ParseError,
                     ShapeMismatch, StructureMismatch, WildredError)
from .fields import GF, FieldSpec, QQ, Rationals, Scalar, field_elements
from .matrix import Mat, invert, is_invertible, kernel_basis, rank, rref
from .pencil import (EquivWitness2, KroneckerData, Pencil, ProjPoint,
                     direct_sum_pencil, kronecker_decompose, pencil_equiv,
                     reconstruct_pencil)
from .spatial import (MoebiusMap, RankTriple, Spatial2Canon, SpatialMatrix,
                      SpatialWitness, canon_spatial2, direct_sum_spatial,
                      moebius_match, rank_triple, reconstruct_spatial2,
                      regular_part, slice_tuple, spatial2_equiv,
                      transform_spatial)
from .reps import (Poset, PosetRep, PosetWitness, Quiver, QuiverRep,
                   QuiverWitness, chain_poset_canon, critical_poset,
                   direct_sum_rep, poset_is_wild, poset_iso, quiver_is_tame,
                   quiver_iso)
from .reductions import (MatrixPair, QuiverPairLayout, StepOneLayout,
                         encode_poset_pair, encode_quiver_pair,
                         gadget_similarity_witness, plan_quiver_encoding,
                         poset_pair_layout, simulate_poset_matrices,
                         simulation_step_matrix, step_one_pair, tensor_embed,
                         tensor_transform, wild_gadget)
from .oracle import (EquivProblem, SearchOutcome, brute_force_spatial_equiv,
                     find_invertible, gl_enumerate, gl_list, sim_pairs,
                     solve_intertwiner, tuple_equiv)
from .formats import format_object, parse_path, parse_text
from .rng import SplitMix

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
