"""Hereditarily finite sets, their codes as pointed well-founded extensional
relations, and the translation of membership formulas onto codes."""

from fmtkit.hf.codes import (
    CLAUSES, Code, codes_equal, codes_member, collapse, decode, encode, is_wfe,
    iter_valid_codes, parse_code, pointed_isomorphism, render_code, require_wfe,
    subcode, valid_code_count, wfe_violations,
)
from fmtkit.hf.sets import EMPTY, HFSet, hf_enumerate, ordinal, pair, parse_hf, singleton
from fmtkit.hf.translate import (
    CODE_SIG, DEFAULT_CORPUS, SET_SIG, TransferReport, code_structure,
    default_corpus, hf_structure, translate, verify_truth_transfer,
)
from fmtkit.hf.universe import CodeUniverse, CodingReport, enumerate_wfe, verify_coding_isomorphism

__all__ = [
    "CLAUSES", "CODE_SIG", "Code", "CodeUniverse", "CodingReport",
    "DEFAULT_CORPUS", "EMPTY", "HFSet", "SET_SIG", "TransferReport",
    "code_structure", "codes_equal", "codes_member", "collapse", "decode",
    "default_corpus", "encode", "enumerate_wfe", "hf_enumerate",
    "hf_structure", "is_wfe", "iter_valid_codes", "ordinal", "pair",
    "parse_code", "parse_hf", "pointed_isomorphism", "render_code",
    "require_wfe", "singleton", "subcode", "translate", "valid_code_count",
    "verify_coding_isomorphism", "verify_truth_transfer", "wfe_violations",
]
