"""Verification reports shared by every certificate type.

A certificate is checked by :func:`verify_certificate`, which dispatches on
its type and returns a :class:`VerificationReport` of named checks.
Verifiers never raise on a bad certificate; failures are data.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    checks: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list:
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self) -> list:
        return [c.name for c in self.checks]

    def extend(self, other: VerificationReport, prefix: str = "") -> None:
        self.checks.extend(Check(prefix + c.name, c.passed, c.detail) for c in other.checks)

    def add(self, name: str, passed, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def text(self) -> str:
        return "\n".join(
            f"{'PASS' if c.passed else 'FAIL'}  {c.name}" + (f"  ({c.detail})" if c.detail else "")
            for c in self.checks
        )


@functools.singledispatch
def verify_certificate(cert) -> VerificationReport:
    """Re-derive every claim of a certificate from its data alone.

    Failures are reported as failing checks, never raised.
    """
    raise TypeError(f"no verifier for {type(cert).__name__}")
