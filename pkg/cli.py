import argparse

import commands
from services.verification_service import SUITES


def _common():
    """Options accepted by every verb."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", help="JSON config file (overrides ZQ_CONFIG)")
    parent.add_argument("--out", help="output file, or directory for verify-all; stdout when omitted")
    parent.add_argument("--seed", type=int, help="seed for randomized trials (overrides ZQ_SEED)")
    parent.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    return parent


def setup_parser(parser):
    """Register every verb on the top-level parser and bind its handler."""
    common = _common()
    verbs = parser.add_subparsers(dest="verb", metavar="verb")
    verbs.required = True

    p = verbs.add_parser("norms", parents=[common], help="seminorms and holomorphic norms of a circle function")
    p.add_argument("--kind", required=True,
                   choices=["zygmund", "holder", "lipschitz", "besov", "bz", "bz-exterior", "az"])
    p.add_argument("--in", dest="input", required=True, help="function JSON")
    p.add_argument("--alpha", type=float, default=0.5, help="Hölder exponent")
    p.add_argument("--s", type=float, default=1.0, help="Besov smoothness")
    p.set_defaults(handler=commands.norms_command)

    p = verbs.add_parser("spectral", parents=[common], help="Hilbert transform, Szegő projections, DFT")
    p.add_argument("operator", choices=["hilbert", "hilbert-pv", "szego-interior", "szego-exterior", "dft"])
    p.add_argument("--in", dest="input", required=True, help="function JSON")
    p.set_defaults(handler=commands.spectral_command)

    p = verbs.add_parser("diffeo", parents=[common], help="circle diffeomorphisms")
    actions = p.add_subparsers(dest="action", metavar="action")
    actions.required = True
    a = actions.add_parser("make", parents=[common], help="integrate a log-derivative")
    a.add_argument("--logderiv", required=True, help="function JSON holding log h'")
    for name, text in (("invert", "inverse on the same grid"), ("normalize", "three-point normalization")):
        a = actions.add_parser(name, parents=[common], help=text)
        a.add_argument("first", help="diffeomorphism JSON")
    a = actions.add_parser("compose", parents=[common], help="first ∘ second")
    a.add_argument("first", help="diffeomorphism JSON")
    a.add_argument("second", help="diffeomorphism JSON")
    a = actions.add_parser("distance", parents=[common], help="uniform and Zygmund distances of first ∘ second⁻¹")
    a.add_argument("first", help="diffeomorphism JSON")
    a.add_argument("second", help="diffeomorphism JSON")
    a = actions.add_parser("opnorm", parents=[common], help="empirical norm of P_h")
    a.add_argument("first", help="diffeomorphism JSON")
    a.add_argument("--space", default="zygmund", choices=["zygmund", "holder"])
    a.add_argument("--alpha", type=float, default=0.5)
    p.set_defaults(handler=commands.diffeo_command)

    p = verbs.add_parser("extend", parents=[common], help="Beurling–Ahlfors extension and decay profiles")
    p.add_argument("--in", dest="input", help="function or diffeomorphism JSON")
    p.add_argument("--depths", type=int, help="number of dyadic depths")
    p.add_argument("--field", dest="field_kind", choices=["map", "dbar", "dilatation"])
    actions = p.add_subparsers(dest="action", metavar="action")
    a = actions.add_parser("diagnose", parents=[common], help="decay profile of a stored field as CSV")
    a.add_argument("field", help="field JSON")
    a.add_argument("--order", type=float, default=1.0, help="decay order")
    p.set_defaults(handler=commands.extend_command)

    p = verbs.add_parser("solve", parents=[common], help="normalized solution of the Beltrami equation")
    p.add_argument("--mu", required=True, help="Beltrami coefficient JSON")
    p.add_argument("--normalize", default="disk", choices=sorted(commands.NORMALIZATIONS))
    p.add_argument("--spacing", type=float, help="grid spacing (defaults to solver.spacing)")
    p.set_defaults(handler=commands.solve_command)

    p = verbs.add_parser("weld", parents=[common], help="welding identity for an exterior coefficient")
    p.add_argument("--mu", required=True)
    p.add_argument("--report", help="report JSON path")
    p.add_argument("--tolerance", type=float, default=1e-3)
    p.set_defaults(handler=commands.weld_command)

    p = verbs.add_parser("lambda", parents=[common], help="Λ(μ1, μ2) on the unit circle")
    p.add_argument("--mu1", required=True, help="coefficient inside the disk")
    p.add_argument("--mu2", required=True, help="coefficient outside the disk")
    p.set_defaults(handler=commands.lambda_command)

    p = verbs.add_parser("bounds", parents=[common], help="radii recurrence and the Schwarzian bound")
    p.add_argument("action", choices=["recurrence", "verify"])
    p.add_argument("--alpha", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--mu")
    p.set_defaults(handler=commands.bounds_command)

    p = verbs.add_parser("verify-all", parents=[common], help="run a verification suite")
    p.add_argument("--suite", default="all", choices=sorted(SUITES))
    p.set_defaults(handler=commands.verify_all_command)

    p = verbs.add_parser("fixtures", parents=[common], help="list the fixture catalog")
    p.set_defaults(handler=commands.fixtures_command)

    p = verbs.add_parser("explain", parents=[common], help="describe a check")
    p.add_argument("check")
    p.set_defaults(handler=commands.explain_command)
    return parser
