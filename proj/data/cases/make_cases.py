"""Regenerates the bundled grid documents in this directory."""

import json
import pathlib

HERE = pathlib.Path(__file__).parent


def c(z):
    z = complex(z)
    return [z.real, z.imag]


def box(pmin, pmax, qmin, qmax):
    return [[1.0, 0.0, pmax], [-1.0, 0.0, -pmin], [0.0, 1.0, qmax], [0.0, -1.0, -qmin]]


class Doc:
    def __init__(self, name, description):
        self.doc = {"version": "1", "base_mva": 100.0, "buses": [], "branches": [],
                    "converters": [], "injectors": [], "name": name,
                    "description": description}

    def bus(self, kind="ac", load=0j, vmin=0.95, vmax=1.05, shunt=0j):
        buses = self.doc["buses"]
        buses.append({"id": len(buses) + 1, "kind": kind, "shunt": c(shunt),
                      "v_min": vmin, "v_max": vmax, "load": c(load)})
        return len(buses)

    def line(self, src, dst, z, b=0.0, imax=2.0, rho_src=1.0, angle=0.6, drop=0.5):
        branches = self.doc["branches"]
        rec = {"id": len(branches) + 1, "src": src, "dst": dst, "y_series": c(1 / complex(z)),
               "y_src": c(0.5j * b), "y_dst": c(0.5j * b), "rho_src": c(rho_src),
               "rho_dst": c(1.0), "i_max_src": imax, "i_max_dst": imax,
               "drop_min": -drop, "drop_max": drop, "angle_min": -angle, "angle_max": angle}
        branches.append(rec)
        return rec["id"]

    def cable(self, src, dst, r, imax=2.0):
        return self.line(src, dst, r, 0.0, imax)

    def converter(self, src, dst, rating, loss=0.02, q=0.5, static=0.0):
        convs = self.doc["converters"]
        convs.append({"id": len(convs) + 1, "src": src, "dst": dst, "loss_fwd": loss,
                      "loss_bwd": loss, "static_loss": static, "static_loss_side": "src",
                      "cap_src": box(-rating, rating, -q, q),
                      "cap_dst": box(-rating, rating, -q, q)})

    def gen(self, bus, pmin, pmax, qmin, qmax, cost, cost_q=None):
        inj = self.doc["injectors"]
        inj.append({"id": len(inj) + 1, "bus": bus, "capability": box(pmin, pmax, qmin, qmax),
                    "cost_p": [list(p) for p in cost],
                    "cost_q": [list(p) for p in (cost_q or [])]})

    def save(self, filename):
        (HERE / filename).write_text(json.dumps(self.doc, indent=2) + "\n")


def case2_ac():
    d = Doc("case2_ac", "single generator feeding one load over a lossy line")
    b1 = d.bus()
    b2 = d.bus(load=0.6 + 0.2j)
    d.line(b1, b2, 0.02 + 0.08j, b=0.02)
    d.gen(b1, 0.0, 2.0, -1.0, 1.0, [(0.0, 0.0), (2.0, 20.0)])
    d.save("case2_ac.json")


def case3_ac():
    d = Doc("case3_ac", "radial three-bus feeder with a cheap and an expensive generator")
    b1 = d.bus()
    b2 = d.bus(load=0.6 + 0.2j)
    b3 = d.bus(load=0.5 + 0.15j)
    d.line(b1, b2, 0.01 + 0.05j, b=0.02, imax=0.8)
    d.line(b2, b3, 0.02 + 0.06j, b=0.01)
    d.gen(b1, 0.0, 2.0, -1.0, 1.0, [(0.0, 0.0), (0.5, 5.0), (2.0, 25.0)])
    d.gen(b2, 0.0, 1.0, -0.5, 0.5, [(0.0, 0.0), (1.0, 18.0)])
    d.save("case3_ac.json")


def case4_mesh():
    d = Doc("case4_mesh", "four-bus ring, not radial")
    b = [d.bus(), d.bus(load=0.7 + 0.2j), d.bus(load=0.6 + 0.25j), d.bus(load=0.3 + 0.1j)]
    d.line(b[0], b[1], 0.01 + 0.06j, b=0.02, imax=0.9)
    d.line(b[1], b[2], 0.015 + 0.05j, b=0.02)
    d.line(b[2], b[3], 0.01 + 0.04j, b=0.01)
    d.line(b[3], b[0], 0.02 + 0.08j, b=0.02)
    d.gen(b[0], 0.0, 2.0, -1.0, 1.0, [(0.0, 0.0), (1.0, 10.0), (2.0, 24.0)])
    d.gen(b[2], 0.0, 1.0, -0.6, 0.6, [(0.0, 0.0), (1.0, 16.0)])
    d.save("case4_mesh.json")


def case5_radial():
    d = Doc("case5_radial", "five-bus radial distribution feeder")
    b1 = d.bus(vmin=0.95, vmax=1.05)
    b2 = d.bus(load=0.2 + 0.05j)
    b3 = d.bus(load=0.4 + 0.1j)
    b4 = d.bus()
    b5 = d.bus(load=0.3 + 0.1j, shunt=0.02j)
    d.line(b1, b2, 0.01 + 0.04j, b=0.01)
    d.line(b2, b3, 0.02 + 0.05j)
    d.line(b2, b4, 0.015 + 0.05j)
    d.line(b4, b5, 0.02 + 0.04j, imax=0.35)
    d.gen(b1, 0.0, 2.0, -1.0, 1.0, [(0.0, 0.0), (2.0, 24.0)])
    d.gen(b4, 0.0, 0.5, -0.3, 0.3, [(0.0, 0.0), (0.2, 2.0), (0.5, 8.0)])
    d.save("case5_radial.json")


def mtdc3():
    d = Doc("mtdc3", "three AC areas joined by a radial three-terminal HVDC system")
    a1 = d.bus()
    a2 = d.bus(load=0.3 + 0.1j)
    a3 = d.bus(load=0.5 + 0.15j)
    a4 = d.bus(load=0.4 + 0.1j)
    d1 = d.bus("dc")
    d2 = d.bus("dc")
    d3 = d.bus("dc")
    d.line(a1, a2, 0.01 + 0.05j, b=0.02)
    d.cable(d1, d2, 0.01)
    d.cable(d2, d3, 0.015)
    d.converter(a2, d1, 1.0, loss=0.02)
    d.converter(a3, d2, 1.0, loss=0.02)
    d.converter(a4, d3, 1.0, loss=0.03)
    d.gen(a1, 0.0, 2.5, -1.0, 1.0, [(0.0, 0.0), (2.5, 25.0)])
    d.gen(a3, 0.0, 0.3, -0.5, 0.5, [(0.0, 0.0), (0.3, 6.0)])
    d.gen(a4, 0.0, 0.2, -0.5, 0.5, [(0.0, 0.0), (0.2, 5.0)])
    d.save("mtdc3.json")


def p2p_hvdc():
    d = Doc("p2p_hvdc", "point-to-point HVDC link between two AC buses")
    a1 = d.bus()
    d1 = d.bus("dc")
    d2 = d.bus("dc")
    a2 = d.bus(load=0.8 + 0.3j)
    d.cable(d1, d2, 0.02)
    d.converter(a1, d1, 1.2, loss=0.015, static=0.005)
    d.converter(a2, d2, 1.2, loss=0.015)
    d.gen(a1, 0.0, 2.0, -1.0, 1.0, [(0.0, 0.0), (2.0, 20.0)])
    d.gen(a2, 0.0, 0.5, -0.5, 0.5, [(0.0, 0.0), (0.5, 15.0)])
    d.save("p2p_hvdc.json")


def back_to_back():
    d = Doc("back_to_back", "two AC buses coupled only by a back-to-back converter")
    a1 = d.bus()
    a2 = d.bus()
    a3 = d.bus(load=0.7 + 0.2j)
    d.line(a2, a3, 0.01 + 0.05j, b=0.01)
    d.converter(a1, a2, 1.0, loss=0.02)
    d.gen(a1, 0.0, 2.0, -1.0, 1.0, [(0.0, 0.0), (2.0, 20.0)])
    d.gen(a3, 0.0, 0.5, -0.5, 0.5, [(0.0, 0.0), (0.5, 10.0)])
    d.save("back_to_back.json")


def adversarial_converter():
    d = Doc("adversarial_converter",
            "must-run surplus that is cheaper to burn in converter losses than to dump")
    a1 = d.bus(load=0.2)
    a2 = d.bus(load=0.5)
    d.converter(a1, a2, 2.0, loss=0.1)
    d.gen(a1, 1.0, 2.0, -0.5, 0.5, [(1.0, 1.0), (2.0, 2.0)])
    d.gen(a2, -1.0, 0.0, -0.5, 0.5, [(-1.0, 10.0), (0.0, 0.0)])
    d.save("adversarial_converter.json")


if __name__ == "__main__":
    for make in (case2_ac, case3_ac, case4_mesh, case5_radial, mtdc3, p2p_hvdc, back_to_back,
                 adversarial_converter):
        make()
