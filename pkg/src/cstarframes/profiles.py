"""Instance-file generation profiles for the CLI.

Every profile emits a well-formed instance that passes its own requested
checks: frame families are generated with enough members to cover the
domain and the injective profile clamps singular values by construction.
"""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraSpec
from .errors import UnknownProfile
from .generators import (
    random_endomorphism_family,
    random_injective_operator,
    random_operator,
    random_operator_family,
    random_vector,
)
from .iojson import SCHEMA_VERSION, op_to_json, space_to_json, spec_to_json, vector_to_json
from .modules import ModuleSpace

PROFILES = ("g-frame", "k-frame", "star-commutative", "end-frame", "injective-example")


def _base_instance(spec: AlgebraSpec, domain: ModuleSpace, seed: int) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "algebra": spec_to_json(spec),
        "spaces": {"H": space_to_json(domain)},
        "operators": {},
        "vectors": {},
        "families": {},
        "requests": [],
        "seed": seed,
        "tolerances": {"tol": 1e-9, "eps_strict": 1e-8, "samples": 200},
    }


def _general_spec(rng: np.random.Generator) -> AlgebraSpec:
    choices = ((1,), (2,), (1, 2), (2, 2))
    return AlgebraSpec(choices[int(rng.integers(0, len(choices)))])


def build_instance(profile: str, seed: int) -> dict:
    if profile not in PROFILES:
        raise UnknownProfile(f"unknown profile {profile!r}; choose from {PROFILES}")
    rng = np.random.default_rng(seed)

    if profile == "star-commutative":
        spec = AlgebraSpec((1,) * int(rng.integers(2, 4)))
    else:
        spec = _general_spec(rng)
    rank = int(rng.integers(2, 4))
    domain = ModuleSpace(spec, rank)
    instance = _base_instance(spec, domain, seed)

    if profile == "g-frame":
        members = random_operator_family(rng, domain, int(rng.integers(3, 5)))
        for i, m in enumerate(members):
            instance["operators"][f"T{i}"] = op_to_json(m)
        instance["families"]["F"] = {"type": "operator", "domain": "H",
                                     "members": [f"T{i}" for i in range(len(members))]}
        instance["requests"] = [{"check": "g-frame", "family": "F"}]

    elif profile == "k-frame":
        members = random_endomorphism_family(rng, domain, int(rng.integers(3, 5)))
        for i, m in enumerate(members):
            instance["operators"][f"T{i}"] = op_to_json(m)
        instance["operators"]["K"] = op_to_json(random_operator(rng, domain, domain))
        instance["families"]["F"] = {"type": "operator", "domain": "H",
                                     "members": [f"T{i}" for i in range(len(members))]}
        instance["requests"] = [{"check": "k-g-frame", "family": "F", "k": "K"}]

    elif profile == "star-commutative":
        vectors = [random_vector(rng, domain) for _ in range(rank + 1)]
        for i, v in enumerate(vectors):
            instance["vectors"][f"x{i}"] = vector_to_json(v)
        members = random_endomorphism_family(rng, domain, rank + 1)
        for i, m in enumerate(members):
            instance["operators"][f"T{i}"] = op_to_json(m)
        instance["families"]["V"] = {"type": "vector", "space": "H",
                                     "members": [f"x{i}" for i in range(len(vectors))]}
        instance["families"]["F"] = {"type": "operator", "domain": "H",
                                     "members": [f"T{i}" for i in range(len(members))]}
        instance["requests"] = [
            {"check": "star-frame", "family": "V"},
            {"check": "star-g-frame", "family": "F"},
        ]

    elif profile == "end-frame":
        members = random_endomorphism_family(rng, domain, int(rng.integers(3, 5)))
        for i, m in enumerate(members):
            instance["operators"][f"T{i}"] = op_to_json(m)
        instance["families"]["F"] = {"type": "operator", "domain": "H",
                                     "members": [f"T{i}" for i in range(len(members))]}
        instance["requests"] = [{"check": "end-frame", "family": "F"}]

    else:  # injective-example
        members = [random_injective_operator(rng, domain, domain)
                   for _ in range(int(rng.integers(2, 5)))]
        for i, m in enumerate(members):
            instance["operators"][f"T{i}"] = op_to_json(m)
        instance["families"]["F"] = {"type": "operator", "domain": "H",
                                     "members": [f"T{i}" for i in range(len(members))]}
        instance["requests"] = [{"check": "end-frame", "family": "F"}]

    return instance
