"""SVG rendering of a spectrum on the unit circle with its ``Omega_k`` polygon."""
import xml.etree.ElementTree as ET

RADIUS = 200
MARGIN = 40
SIZE = 2 * (RADIUS + MARGIN)


def _xy(z):
    # SVG y grows downward
    return RADIUS + MARGIN + RADIUS * z.real, RADIUS + MARGIN - RADIUS * z.imag


def _fmt(x):
    return f"{x:.3f}"


def render_omega(spec, polygon, k, show_chords=False):
    """Return the SVG document as a string."""
    root = ET.Element(
        "svg", xmlns="http://www.w3.org/2000/svg", version="1.1",
        width=f"{SIZE}px", height=f"{SIZE}px", viewBox=f"0 0 {SIZE} {SIZE}",
    )
    cx, cy = _xy(0j)
    ET.SubElement(root, "circle", cx=_fmt(cx), cy=_fmt(cy), r=str(RADIUS),
                  fill="none", stroke="black")
    pts = spec.points
    n = len(pts)
    if show_chords and n > k:
        g = ET.SubElement(root, "g", stroke="gray")
        g.set("stroke-width", "0.8")
        for i in range(n):
            (x1, y1), (x2, y2) = _xy(pts[i]), _xy(pts[(i + k) % n])
            ET.SubElement(g, "line", x1=_fmt(x1), y1=_fmt(y1), x2=_fmt(x2), y2=_fmt(y2))
    if not polygon.is_empty:
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in map(_xy, polygon.vertices))
        if polygon.kind == "Point":
            x, y = _xy(polygon.vertices[0])
            ET.SubElement(root, "circle", cx=_fmt(x), cy=_fmt(y), r="4", fill="steelblue")
        else:
            shape = ET.SubElement(root, "polygon", points=coords, fill="steelblue", stroke="navy")
            shape.set("fill-opacity", "0.4")
    for j, z in enumerate(pts):
        x, y = _xy(z)
        ET.SubElement(root, "circle", cx=_fmt(x), cy=_fmt(y), r="4", fill="crimson")
        lx, ly = _xy(1.1 * z)
        label = ET.SubElement(root, "text", x=_fmt(lx), y=_fmt(ly))
        label.set("font-size", "12")
        label.set("text-anchor", "middle")
        label.text = str(j + 1)
    title = ET.SubElement(root, "text", x="10", y="20")
    title.set("font-size", "14")
    title.text = f"Omega_{k}, N = {n}"
    return ET.tostring(root, encoding="unicode")
