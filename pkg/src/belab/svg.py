"""Minimal log-log SVG plots (axes, decade ticks, point and line series)."""
import math
from xml.sax.saxutils import escape

W, H = 640, 440
LEFT, RIGHT, TOP, BOTTOM = 80, 20, 40, 60
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e")


def _fmt_decade(e):
    return f"1e{e}"


def loglog_svg(series, title="", xlabel="n", ylabel="D"):
    """Render series [{label, xs, ys, style: 'points'|'line'}] to an SVG string."""
    xs = [x for s in series for x in s["xs"] if x > 0]
    ys = [y for s in series for y in s["ys"] if y > 0]
    if not xs or not ys:
        raise ValueError("nothing positive to plot")
    x0, x1 = math.floor(math.log10(min(xs))), math.ceil(math.log10(max(xs)))
    y0, y1 = math.floor(math.log10(min(ys))), math.ceil(math.log10(max(ys)))
    x1, y1 = max(x1, x0 + 1), max(y1, y0 + 1)
    pw, ph = W - LEFT - RIGHT, H - TOP - BOTTOM

    def px(x):
        return LEFT + pw * (math.log10(x) - x0) / (x1 - x0)

    def py(y):
        return TOP + ph * (1 - (math.log10(y) - y0) / (y1 - y0))

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
           f'<rect width="{W}" height="{H}" fill="white"/>',
           f'<text x="{W / 2:.1f}" y="24" text-anchor="middle" font-size="14">{escape(title)}</text>',
           f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for e in range(x0, x1 + 1):
        x = px(10.0**e)
        out.append(f'<line x1="{x:.1f}" y1="{TOP + ph}" x2="{x:.1f}" y2="{TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.1f}" y="{TOP + ph + 20}" text-anchor="middle" font-size="11">{_fmt_decade(e)}</text>')
    for e in range(y0, y1 + 1):
        y = py(10.0**e)
        out.append(f'<line x1="{LEFT - 5}" y1="{y:.1f}" x2="{LEFT}" y2="{y:.1f}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 8}" y="{y + 4:.1f}" text-anchor="end" font-size="11">{_fmt_decade(e)}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.1f}" y="{H - 15}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>')
    out.append(f'<text x="18" y="{TOP + ph / 2:.1f}" text-anchor="middle" font-size="12" '
               f'transform="rotate(-90 18 {TOP + ph / 2:.1f})">{escape(ylabel)}</text>')
    for k, s in enumerate(series):
        color = COLORS[k % len(COLORS)]
        pts = [(px(x), py(y)) for x, y in zip(s["xs"], s["ys"]) if x > 0 and y > 0]
        if s.get("style") == "line" and len(pts) > 1:
            d = " ".join(f"{a:.2f},{b:.2f}" for a, b in pts)
            out.append(f'<polyline points="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        else:
            out.extend(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="3.5" fill="{color}"/>' for a, b in pts)
        ly = TOP + 16 + 16 * k
        out.append(f'<rect x="{LEFT + 12}" y="{ly - 9}" width="10" height="10" fill="{color}"/>')
        out.append(f'<text x="{LEFT + 28}" y="{ly}" font-size="11">{escape(s["label"])}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
