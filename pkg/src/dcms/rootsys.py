"""Catalog of generalized root systems with admissible deformations.

Families:

* ``A``      -- two blocks of sizes n, m; roots e_i - e_j
* ``BC``     -- blocks n, m; roots e_i +- e_j, e_i, 2 e_i
* ``B,C,C0,D`` -- sub-families of BC with some root classes removed
* ``AB13``   -- rank 4 exceptional (three x's and one y)
* ``G12``    -- rank 3 exceptional (x1+x2+x3 = 0 plane plus one y)
* ``D21``    -- rank 3 exceptional with three form parameters

Each system stores the deformed bilinear form B (symbolic in the
deformation parameters), the form at the undeformed point (used to fix
the real/imaginary classification), the multiplicity map, a positive
subset chosen by "first nonzero coordinate positive", and a lattice
basis that turns every root pairing exponential into a Laurent monomial.

Vectors are tuples of Fractions; symbolic data only enters through the
form and the multiplicities.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .exact import ParamField, Scalar

Vec = tuple  # tuple of Fractions

FAMILIES = ("A", "BC", "B", "C", "C0", "D", "AB13", "G12", "D21")

CLASSICAL = ("A", "BC", "B", "C", "C0", "D")


class UnsupportedFamilyError(ValueError):
    """Raised when an operation is only defined for other families."""


def _vec(*coords) -> Vec:
    return tuple(Fraction(c) for c in coords)


def _unit(d: int, i: int, scale=1) -> Vec:
    v = [Fraction(0)] * d
    v[i] = Fraction(scale)
    return tuple(v)


def _add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def _sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def _smul(c, v: Vec) -> Vec:
    c = Fraction(c)
    return tuple(c * a for a in v)


def _neg(v: Vec) -> Vec:
    return tuple(-a for a in v)


def _is_positive(v: Vec) -> bool:
    for c in v:
        if c:
            return c > 0
    return False


class GRS:
    """A generalized root system with an admissible deformed form."""

    def __init__(self, family, n, m, field, coord_names, gram, gram0,
                 roots, imaginary, mult, lattice_basis, mult_classes):
        self.family = family
        self.n = n
        self.m = m
        self.field = field
        self.coord_names = tuple(coord_names)
        self.dim = len(coord_names)
        self.gram = gram
        self.gram0 = gram0
        self.roots = tuple(sorted(roots))
        self.imaginary = frozenset(imaginary)
        self.mult = mult
        self.lattice_basis = tuple(lattice_basis)
        self.mult_classes = mult_classes  # label -> tuple of positive roots
        self.positive_roots = tuple(sorted(r for r in self.roots if _is_positive(r)))
        self._lattice_coords = {}
        self._euler_rows = None
        d = self.dim
        self._basis_pairings = tuple(
            tuple(self.pairing(b, _unit(d, j)) for j in range(d))
            for b in self.lattice_basis)

    # -- basic pairings

    def _form_value(self, gram, u, v) -> Scalar:
        total = self.field.zero
        for i, ui in enumerate(u):
            if isinstance(ui, Fraction) and not ui:
                continue
            for j, vj in enumerate(v):
                if isinstance(vj, Fraction) and not vj:
                    continue
                g = gram[i][j]
                if g.is_zero():
                    continue
                total = total + self.field.scalar(ui) * self.field.scalar(vj) * g \
                    if isinstance(ui, Fraction) or isinstance(vj, Fraction) \
                    else total + ui * vj * g
        return total

    def pairing(self, u, v, form: str = "deformed") -> Scalar:
        """Bilinear pairing of two vectors: deformed, euclidean or original."""
        if form == "euclidean":
            if all(isinstance(c, Fraction) for c in (*u, *v)):
                return self.field.from_fraction(sum((a * b for a, b in zip(u, v)),
                                                    Fraction(0)))
            total = self.field.zero
            for a, b in zip(u, v):
                total = total + self.field.scalar(a) * self.field.scalar(b)
            return total
        gram = self.gram if form == "deformed" else self.gram0
        total = self.field.zero
        for i, ui in enumerate(u):
            si = self.field.scalar(ui)
            if si.is_zero():
                continue
            row = gram[i]
            for j, vj in enumerate(v):
                if row[j].is_zero():
                    continue
                sj = self.field.scalar(vj)
                if not sj.is_zero():
                    total = total + si * sj * row[j]
        return total

    def euclid(self, u: Vec, v: Vec) -> Fraction:
        return sum((a * b for a, b in zip(u, v)), Fraction(0))

    def reflect(self, alpha, v, form: str = "deformed"):
        """Reflection of v in the hyperplane of alpha for the chosen form."""
        if form == "euclidean":
            aa = self.euclid(alpha, alpha)
            if not aa:
                raise ValueError("isotropic root for the euclidean form")
            c = 2 * self.euclid(alpha, v) / aa
            return _sub(v, _smul(c, alpha))
        aa = self.pairing(alpha, alpha, form)
        if aa.is_zero():
            raise ValueError(f"isotropic root for the {form} form")
        c = (2 * self.pairing(alpha, v, form)) / aa
        if all(isinstance(x, Fraction) for x in (*alpha, *v)):
            cf = c.as_fraction()
            return _sub(v, _smul(cf, alpha))
        sc = tuple(self.field.scalar(x) for x in v)
        sa = tuple(self.field.scalar(x) for x in alpha)
        return tuple(x - c * a for x, a in zip(sc, sa))

    def reflect_euclid(self, alpha: Vec, v: Vec) -> Vec:
        aa = self.euclid(alpha, alpha)
        c = 2 * self.euclid(alpha, v) / aa
        return _sub(v, _smul(c, alpha))

    # -- derived data

    def multiplicity(self, root: Vec) -> Scalar:
        return self.mult[root]

    def is_imaginary(self, root: Vec) -> bool:
        return root in self.imaginary

    def real_positive(self):
        return tuple(r for r in self.positive_roots if r not in self.imaginary)

    def rho(self):
        """Multiplicity-weighted sum of the positive roots."""
        coords = [self.field.zero] * self.dim
        for a in self.positive_roots:
            ma = self.mult[a]
            for i, c in enumerate(a):
                if c:
                    coords[i] = coords[i] + ma * self.field.from_fraction(c)
        return tuple(coords)

    def rho_norm2(self) -> Scalar:
        r = self.rho()
        return self.pairing(r, r)

    def rho_half_pairing(self, v) -> Scalar:
        """Deformed pairing of (1/2) sum m_a a with v."""
        total = self.field.zero
        for a in self.positive_roots:
            total = total + self.mult[a] * self.pairing(a, v)
        return total / 2

    def lattice_coords(self, root: Vec) -> tuple[int, ...]:
        """Integer coordinates of a root in the lattice basis."""
        got = self._lattice_coords.get(root)
        if got is not None:
            return got
        d = self.dim
        # solve sum_t c_t * basis_t = root by rational elimination
        rows = [[self.lattice_basis[t][i] for t in range(d)] + [root[i]]
                for i in range(d)]
        for c in range(d):
            piv = next(i for i in range(c, d) if rows[i][c])
            rows[c], rows[piv] = rows[piv], rows[c]
            pv = rows[c][c]
            rows[c] = [x / pv for x in rows[c]]
            for i in range(d):
                if i != c and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
        coords = []
        for i in range(d):
            x = rows[i][d]
            if x.denominator != 1:
                raise ValueError(f"root {root} is not integral in the lattice basis")
            coords.append(int(x))
        out = tuple(coords)
        self._lattice_coords[root] = out
        return out

    def euler_coefficients(self, v) -> tuple[Scalar, ...]:
        """Coefficients of the directional derivative along v in the basis
        of lattice derivations: component t is the deformed pairing (b_t, v)."""
        out = []
        for row in self._basis_pairings:
            total = self.field.zero
            for j, c in enumerate(v):
                s = self.field.scalar(c)
                if not s.is_zero() and not row[j].is_zero():
                    total = total + s * row[j]
            out.append(total)
        return tuple(out)

    def homogeneous_orbit(self):
        """The Weyl orbit of homogeneous vectors used for the integrals."""
        if self.family == "A":
            return tuple(_unit(self.dim, i) for i in range(self.dim))
        if self.family in CLASSICAL:
            orbit = []
            for i in range(self.dim):
                orbit.append(_unit(self.dim, i))
                orbit.append(_unit(self.dim, i, -1))
            return tuple(orbit)
        raise UnsupportedFamilyError(
            f"no homogeneous orbit implemented for family {self.family}")

    def with_multiplicities(self, new_mult: dict) -> "GRS":
        g = GRS.__new__(GRS)
        g.__dict__.update(self.__dict__)
        g.mult = dict(new_mult)
        g._lattice_coords = dict(self._lattice_coords)
        return g

    def perturbations(self):
        """One perturbed copy per multiplicity class (class value + 1)."""
        out = []
        for label, reps in self.mult_classes.items():
            new = dict(self.mult)
            for r in self.roots:
                pos = r if _is_positive(r) else _neg(r)
                if pos in reps:
                    new[r] = new[r] + 1
            out.append((label, self.with_multiplicities(new)))
        return out

    def descriptor(self) -> dict:
        d = {"family": self.family, "parameters": list(self.field.names)}
        if self.family in CLASSICAL:
            d["n"] = self.n
            d["m"] = self.m
        return d

    def root_data(self) -> dict:
        """Deterministic dump of the root data for golden tests."""
        roots = []
        for r in sorted(self.roots):
            roots.append({
                "coords": [str(c) for c in r],
                "kind": "imaginary" if r in self.imaginary else "real",
                "multiplicity": str(self.mult[r]),
            })
        return {
            "system": self.descriptor(),
            "coordinates": list(self.coord_names),
            "deformed_gram": [[str(x) for x in row] for row in self.gram],
            "lattice_basis": [[str(c) for c in b] for b in self.lattice_basis],
            "roots": roots,
        }

    def label(self) -> str:
        if self.family in CLASSICAL:
            return f"{self.family}({self.n},{self.m})"
        return self.family

    def __repr__(self):
        return f"GRS[{self.label()}]"


# ---------------------------------------------------------------------------
# constructors


def _diag_gram(field, diag):
    d = len(diag)
    z = field.zero
    return tuple(tuple(diag[i] if i == j else z for j in range(d))
                 for i in range(d))


def _classical_coords(n, m):
    return tuple([f"x{i+1}" for i in range(n)] + [f"y{j+1}" for j in range(m)])


def _build_A(n: int, m: int) -> GRS:
    if n < 1 or m < 0 or n + m < 2:
        raise ValueError("family A needs n >= 1 blocks with n + m >= 2")
    field = ParamField(("k",))
    k = field.param("k")
    d = n + m
    diag = tuple(field.one if i < n else k for i in range(d))
    diag0 = tuple(field.one if i < n else -field.one for i in range(d))
    roots = []
    imaginary = set()
    mult = {}
    classes = {"pair_x": [], "pair_y": [], "imaginary": []}
    for i in range(d):
        for j in range(d):
            if i == j:
                continue
            r = _sub(_unit(d, i), _unit(d, j))
            roots.append(r)
            if i < n and j < n:
                mult[r] = k
                if i < j:
                    classes["pair_x"].append(r)
            elif i >= n and j >= n:
                mult[r] = field.one / k
                if i < j:
                    classes["pair_y"].append(r)
            else:
                mult[r] = field.one
                imaginary.add(r)
                if _is_positive(r):
                    classes["imaginary"].append(r)
    classes = {lab: frozenset(v) for lab, v in classes.items() if v}
    basis = [_unit(d, i) for i in range(d)]
    return GRS("A", n, m, field, _classical_coords(n, m),
               _diag_gram(field, diag), _diag_gram(field, diag0),
               roots, imaginary, mult, basis, classes)


def _build_BC_like(family: str, n: int, m: int) -> GRS:
    if family == "C0":
        if n not in (0, 1):
            raise ValueError("family C0 lives on a single x coordinate")
        n = 1
    if family == "D" and n < 2:
        raise ValueError("family D needs n >= 2")
    if n < 0 or m < 0 or n + m < 1:
        raise ValueError("invalid block sizes")
    names = {"BC": ("k", "p", "q"), "B": ("k", "p"), "C": ("k", "q"),
             "C0": ("k",), "D": ("k",)}[family]
    field = ParamField(names)
    k = field.param("k")
    p = field.param("p") if "p" in names else field.zero
    q = field.param("q") if "q" in names else field.zero
    r = p / k
    s = (2 * q + 1 - k) / (2 * k)
    has_single_x = family in ("BC", "B")
    has_single_y = family in ("BC", "B")
    has_double_x = family in ("BC", "C")
    has_double_y = family in ("BC", "B", "C", "C0", "D")
    d = n + m
    diag = tuple(field.one if i < n else k for i in range(d))
    diag0 = tuple(field.one if i < n else -field.one for i in range(d))
    roots = []
    imaginary = set()
    mult = {}
    classes: dict = {}

    def put(root, value, label):
        roots.append(root)
        mult[root] = value
        if _is_positive(root):
            classes.setdefault(label, []).append(root)

    for i in range(d):
        for j in range(i + 1, d):
            for sj in (1, -1):
                base = _add(_unit(d, i), _unit(d, j, sj))
                if i < n and j < n:
                    lab, val = "pair_x", k
                elif i >= n and j >= n:
                    lab, val = "pair_y", field.one / k
                else:
                    lab, val = "imaginary", field.one
                for root in (base, _neg(base)):
                    put(root, val, lab)
                    if lab == "imaginary":
                        imaginary.add(root)
    for i in range(d):
        xblock = i < n
        if (xblock and has_single_x) or (not xblock and has_single_y):
            val = p if xblock else r
            lab = "single_x" if xblock else "single_y"
            for root in (_unit(d, i), _unit(d, i, -1)):
                put(root, val, lab)
        if (xblock and has_double_x) or (not xblock and has_double_y):
            val = q if xblock else s
            lab = "double_x" if xblock else "double_y"
            for root in (_unit(d, i, 2), _unit(d, i, -2)):
                put(root, val, lab)
    classes = {lab: frozenset(v) for lab, v in classes.items() if v}
    basis = [_unit(d, i) for i in range(d)]
    return GRS(family, n, m, field, _classical_coords(n, m),
               _diag_gram(field, diag), _diag_gram(field, diag0),
               roots, imaginary, mult, basis, classes)


def _build_AB13() -> GRS:
    field = ParamField(("k",))
    k = field.param("k")
    d = 4
    diag = (field.one, field.one, field.one, 3 * k)
    diag0 = (field.one, field.one, field.one, -3 * field.one)
    a = (3 * k + 1) / 2
    b = (1 - k) / (2 * k)
    c = (3 * k - 1) / 4
    roots = []
    imaginary = set()
    mult = {}
    classes = {"single_x": [], "single_y": [], "pair_x": [], "imaginary": []}

    def put(root, value, label):
        roots.append(root)
        mult[root] = value
        if _is_positive(root):
            classes[label].append(root)

    for i in range(3):
        for sgn in (1, -1):
            put(_unit(d, i, sgn), a, "single_x")
    for sgn in (1, -1):
        put(_unit(d, 3, sgn), b, "single_y")
    for i in range(3):
        for j in range(i + 1, 3):
            for sj in (1, -1):
                base = _add(_unit(d, i), _unit(d, j, sj))
                put(base, c, "pair_x")
                put(_neg(base), c, "pair_x")
    half = Fraction(1, 2)
    for signs in product((1, -1), repeat=4):
        root = tuple(half * s for s in signs)
        put(root, field.one, "imaginary")
        imaginary.add(root)
    classes = {lab: frozenset(v) for lab, v in classes.items()}
    basis = [_unit(d, 0), _unit(d, 1), _unit(d, 2),
             _vec(half, half, half, half)]
    return GRS("AB13", 1, 3, field, ("x1", "x2", "x3", "y"),
               _diag_gram(field, diag), _diag_gram(field, diag0),
               roots, imaginary, mult, basis, classes)


def _build_G12() -> GRS:
    field = ParamField(("k",))
    k = field.param("k")
    one, zero = field.one, field.zero
    half = field.from_fraction(Fraction(1, 2))
    gram = ((one, -half, zero), (-half, one, zero), (zero, zero, k))
    gram0 = ((one, -half, zero), (-half, one, zero), (zero, zero, -one))
    a = 1 + 2 * k
    b = (2 * k - 1) / 3
    c = field.one / k + 2
    dd = field.one / (2 * k) - half
    e1, e2 = _vec(1, 0, 0), _vec(0, 1, 0)
    e3 = _vec(-1, -1, 0)
    e4 = _vec(0, 0, 1)
    short = [e1, e2, e3]
    roots = []
    imaginary = set()
    mult = {}
    classes = {"short_x": [], "long_x": [], "single_y": [], "double_y": [],
               "imaginary": []}

    def put(root, value, label):
        roots.append(root)
        mult[root] = value
        if _is_positive(root):
            classes[label].append(root)

    for v in short:
        put(v, a, "short_x")
        put(_neg(v), a, "short_x")
    for i in range(3):
        for j in range(3):
            if i < j:
                r = _sub(short[i], short[j])
                put(r, b, "long_x")
                put(_neg(r), b, "long_x")
    put(e4, c, "single_y")
    put(_neg(e4), c, "single_y")
    put(_smul(2, e4), dd, "double_y")
    put(_smul(-2, e4), dd, "double_y")
    for v in short:
        for sgn in (1, -1):
            r = _add(v, _smul(sgn, e4))
            put(r, field.one, "imaginary")
            imaginary.add(r)
    classes = {lab: frozenset(v) for lab, v in classes.items()}
    basis = [e1, e2, e4]
    return GRS("G12", 1, 2, field, ("x1", "x2", "y"),
               gram, gram0, roots, imaginary, mult, basis, classes)


def _build_D21() -> GRS:
    field = ParamField(("l1", "l2", "l3"))
    l1, l2, l3 = field.params()
    k = l1 + l2 + l3 - 1
    gram = _diag_gram(field, (l1, l2, l3))
    # undeformed point: parameters on the plane l1 + l2 + l3 = 0
    gram0 = _diag_gram(field, (l1, l2, -l1 - l2))
    roots = []
    imaginary = set()
    mult = {}
    classes = {"double_1": [], "double_2": [], "double_3": [], "imaginary": []}

    def put(root, value, label):
        roots.append(root)
        mult[root] = value
        if _is_positive(root):
            classes[label].append(root)

    lams = (l1, l2, l3)
    for i in range(3):
        mi = (k + 1) / (2 * lams[i]) - 1
        put(_unit(3, i, 2), mi, f"double_{i+1}")
        put(_unit(3, i, -2), mi, f"double_{i+1}")
    for s2 in (1, -1):
        for s3 in (1, -1):
            r = _vec(1, s2, s3)
            put(r, field.one, "imaginary")
            put(_neg(r), field.one, "imaginary")
            imaginary.add(r)
            imaginary.add(_neg(r))
    classes = {lab: frozenset(v) for lab, v in classes.items()}
    basis = [_unit(3, 0), _unit(3, 1), _unit(3, 2)]
    return GRS("D21", 0, 0, field, ("x1", "x2", "x3"),
               gram, gram0, roots, imaginary, mult, basis, classes)


def build_system(family: str, n: int = 0, m: int = 0) -> GRS:
    """Construct a generalized root system with its admissible deformation.

    For family A the block sizes are the numbers of x and y coordinates
    (n + m ambient dimensions).  The exceptional families ignore n and m.
    """
    family = family.upper()
    if family == "A":
        return _build_A(n, m)
    if family in ("BC", "B", "C", "C0", "D"):
        return _build_BC_like(family, n, m)
    if family == "AB13":
        return _build_AB13()
    if family == "G12":
        return _build_G12()
    if family == "D21":
        return _build_D21()
    raise ValueError(f"unknown family {family!r}")


def pairing(g: GRS, u, v, form: str = "deformed") -> Scalar:
    return g.pairing(u, v, form)


def reflect(g: GRS, alpha, v, form: str = "deformed"):
    return g.reflect(alpha, v, form)


def homogeneous_orbit(g: GRS):
    return g.homogeneous_orbit()


def rho(g: GRS):
    return g.rho()


def geometric_coordinates(g: GRS):
    """Lattice basis, per-root integer exponents and basis pairings."""
    coords = {r: g.lattice_coords(r) for r in g.roots}
    return g.lattice_basis, coords, g._basis_pairings
