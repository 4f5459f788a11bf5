"""Capacity of symmetric PIR under arbitrary collusion and eavesdropping patterns.

Only the joint pattern matters: with ``F*`` the optimum of the packing LP on
the joint pattern's incidence matrix, the capacity is ``1 - 1/F*`` whenever
the shared randomness ratio satisfies ``rho >= 1/(F* - 1)`` and zero
otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .lp import solve_lp1
from .patterns import (
    COLLUSION,
    EAVESDROPPING,
    Pattern,
    complete_coverage,
    incidence_matrix,
    join_patterns,
    validate,
)
from .rational import format_rational, rational_to_json

K_NOTE = "model assumes K >= 2 messages; the capacity does not depend on K"
FREE_DB_PRIVACY_NOTE = (
    "database privacy against the user is obtained at no extra download cost, "
    "so the PIR and SPIR capacities coincide"
)


@dataclass(frozen=True)
class CapacityReport:
    """Everything the capacity formula yields for one pair of patterns.

    When ``rho_given`` is None, ``capacity`` holds the value attained once
    enough randomness is shared and ``achievable`` is None.
    """

    f_star: Fraction
    capacity: Fraction
    rho_threshold: Fraction
    rho_given: Fraction | None
    achievable: bool | None
    joint_pattern: Pattern
    y_star: tuple[Fraction, ...]
    added_singletons: tuple[int, ...] = ()
    notes: tuple[str, ...] = field(default=())

    @property
    def conditional_capacity(self) -> Fraction:
        return 1 - 1 / self.f_star

    def to_dict(self) -> dict:
        return {
            "n": self.joint_pattern.n_servers,
            "joint_pattern": self.joint_pattern.to_lists(),
            "added_singletons": list(self.added_singletons),
            "f_star": rational_to_json(self.f_star),
            "y_star": [rational_to_json(v) for v in self.y_star],
            "capacity": rational_to_json(self.capacity),
            "rho_threshold": rational_to_json(self.rho_threshold),
            "rho_given": None if self.rho_given is None else rational_to_json(self.rho_given),
            "achievable": self.achievable,
            "notes": list(self.notes),
        }

    def summary_lines(self) -> list[str]:
        lines = [
            f"joint pattern     {self.joint_pattern.to_lists()}",
            f"added singletons  {list(self.added_singletons) or 'none'}",
            f"F*                {format_rational(self.f_star)}",
            f"y*                ({', '.join(format_rational(v) for v in self.y_star)})",
            f"rho threshold     {format_rational(self.rho_threshold)}",
        ]
        if self.rho_given is not None:
            lines.append(f"rho given         {format_rational(self.rho_given)}")
        lines.append(f"capacity          {format_rational(self.capacity)}")
        return lines


def spir_capacity(pc: Pattern, pe: Pattern | None = None, rho=None) -> CapacityReport:
    """Capacity report for collusion pattern ``pc`` and eavesdropping pattern ``pe``.

    Raises :class:`~spircap.errors.FullSetPresent` if either pattern contains
    the set of all servers.
    """
    if pe is None:
        pe = Pattern.empty(pc.n_servers)
    validate(pc)
    validate(pe)
    raw = join_patterns(pc, pe)
    joint = complete_coverage(raw)
    added = raw.uncovered
    lp = solve_lp1(incidence_matrix(joint))
    f_star = lp.value
    threshold = 1 / (f_star - 1)
    conditional = 1 - 1 / f_star
    notes = [K_NOTE]
    if added:
        notes.append(f"singleton sets added for uncovered servers {list(added)}")
    if rho is None:
        achievable, cap = None, conditional
    else:
        rho = Fraction(rho)
        achievable = rho >= threshold
        cap = conditional if achievable else Fraction(0)
    return CapacityReport(
        f_star=f_star,
        capacity=cap,
        rho_threshold=threshold,
        rho_given=rho,
        achievable=achievable,
        joint_pattern=joint,
        y_star=lp.vector,
        added_singletons=added,
        notes=tuple(notes),
    )


def t_espir_patterns(n: int, t: int, e: int) -> tuple[Pattern, Pattern]:
    return Pattern.symmetric(n, t, COLLUSION), Pattern.symmetric(n, e, EAVESDROPPING)


def t_espir_capacity(n: int, t: int, e: int, rho) -> Fraction:
    """Capacity with any ``t`` servers colluding and any ``e`` eavesdropped.

    Computed through the LP on the symmetric patterns, not the closed form.
    """
    pc, pe = t_espir_patterns(n, t, e)
    return spir_capacity(pc, pe, rho).capacity


def t_espir_closed_form(n: int, t: int, e: int, rho) -> Fraction:
    d = max(t, e)
    return 1 - Fraction(d, n) if Fraction(rho) >= Fraction(d, n - d) else Fraction(0)


def pir_eavesdrop_report(pe: Pattern, rho=None) -> CapacityReport:
    """PIR under an eavesdropping pattern alone (no collusion beyond single servers)."""
    validate(pe)
    pc = Pattern.singletons(pe.n_servers)
    report = spir_capacity(pc, pe, rho)
    notes = list(report.notes) + [FREE_DB_PRIVACY_NOTE]
    if pe.uncovered:
        notes.append(
            "servers " + str(list(pe.uncovered)) + " lie in no eavesdropping set: the LP on the "
            "eavesdropping incidence matrix alone is unbounded, so the singleton "
            "collusion sets were joined in"
        )
    return CapacityReport(**{**report.__dict__, "notes": tuple(notes)})


def pir_eavesdrop_capacity(pe: Pattern, rho) -> Fraction:
    return pir_eavesdrop_report(pe, rho).capacity
