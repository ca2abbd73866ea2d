from . import addresses
from .addresses import ROOT, ball, dist, sphere, sphere_size
from .classify import (
    ConjugacyResult,
    Elliptic,
    Hyperbolic,
    Inversion,
    OrbitalType,
    Undetermined,
    classify,
    conjugacy_test,
    families,
    orbital_type,
    phi_v1,
    phi_vnu,
    translation_length,
    type_about,
    verify_spherical_transitivity,
)
from .elements import (
    Affine,
    Identity,
    Portrait,
    Product,
    TreeAut,
    Truncated,
    TypeSpec,
    all_type_specs,
    conjugate,
    element_from_json,
    make_edge_flip,
    make_hyperbolic_translation,
    make_spherically_transitive,
    make_type_nP,
    parse_element,
    random_automorphism,
    random_stabilizer_element,
    tree_ops,
)
from .generation import (
    Construction,
    default_supply,
    evaluate_hs,
    stabilizer_approximation,
    vertex_transitivity_witness,
)
