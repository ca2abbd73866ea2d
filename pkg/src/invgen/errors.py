"""Exception taxonomy shared by every module.

Each error carries a stable ``code`` so the CLI can emit machine-readable
failures; extra keyword details end up in the JSON payload.
"""
from __future__ import annotations


class InvgenError(Exception):
    code = "error"

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.code)
        self.details = details

    def to_json(self) -> dict:
        out = {"error": self.code, "message": str(self)}
        out.update({k: _plain(v) for k, v in self.details.items()})
        return out


def _plain(value):
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return str(value)


# perm_core
class CapExceeded(InvgenError):
    code = "CapExceeded"


class NotASubgroup(InvgenError):
    code = "NotASubgroup"


class NotTransitive(InvgenError):
    code = "NotTransitive"


class DomainTooSmall(InvgenError):
    code = "DomainTooSmall"


class SearchBudgetExceeded(InvgenError):
    code = "SearchBudgetExceeded"


class SupplyNotComplete(InvgenError):
    code = "SupplyNotComplete"


# words
class VariableOutOfRange(InvgenError):
    code = "VariableOutOfRange"


class BudgetExceeded(InvgenError):
    code = "BudgetExceeded"


# matgrp
class NotUnimodular(InvgenError):
    code = "NotUnimodular"


class ZeroElement(InvgenError):
    code = "ZeroElement"


class NoRealRoot(InvgenError):
    code = "NoRealRoot"


class TrialsExhausted(InvgenError):
    code = "TrialsExhausted"


class PreconditionViolation(InvgenError):
    code = "PreconditionViolation"


# treeaut
class DepthExhausted(InvgenError):
    code = "DepthExhausted"


class WrongClass(InvgenError):
    code = "WrongClass"


class NotInStabilizer(InvgenError):
    code = "NotInStabilizer"


class NotInBallStabilizer(InvgenError):
    code = "NotInBallStabilizer"


class InvalidPartition(InvgenError):
    code = "InvalidPartition"


class SupplyIncomplete(InvgenError):
    code = "SupplyIncomplete"
