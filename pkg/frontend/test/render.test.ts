import { execFileSync } from "node:child_process";
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { beforeAll, describe, expect, it } from "vitest";

import { column, parseCsv, validatePanel, PANEL_COLUMNS, type Panel } from "../src/csv.js";
import { encodePng } from "../src/png.js";
import { Raster } from "../src/draw.js";
import { renderPanel } from "../src/render.js";
import { main, parseArgs, run } from "../src/cli.js";

const PNG_SIGNATURE = Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);

let dir: string;
const csvPath: Record<Panel, string> = {} as Record<Panel, string>;

beforeAll(() => {
    // contract test: consume exactly what the simulator CLI emits for the
    // default configs of the three presets
    dir = mkdtempSync(join(tmpdir(), "render-figs-"));
    for (const panel of ["fig3", "fig4", "fig5"] as Panel[]) {
        execFileSync("python3", ["-m", "bathprobe.cli", panel, "--out", dir], {
            stdio: ["ignore", "ignore", "inherit"],
        });
        csvPath[panel] = join(dir, `${panel}.csv`);
        expect(existsSync(csvPath[panel])).toBe(true);
    }
}, 300_000);

function pngDims(buf: Buffer): [number, number] {
    expect(buf.subarray(0, 8).equals(PNG_SIGNATURE)).toBe(true);
    expect(buf.subarray(12, 16).toString("ascii")).toBe("IHDR");
    return [buf.readUInt32BE(16), buf.readUInt32BE(20)];
}

describe("rendering the default CSVs", () => {
    it.each(["fig3", "fig4", "fig5"] as Panel[])("renders %s to a valid PNG", (panel) => {
        const out = join(dir, `${panel}.png`);
        const code = main([csvPath[panel], "--panel", panel, "--out", out]);
        expect(code).toBe(0);
        const buf = readFileSync(out);
        const [w, h] = pngDims(buf);
        expect(w).toBeGreaterThan(100);
        expect(h).toBeGreaterThan(100);
        expect(buf.length).toBeGreaterThan(2000);
    });

    it("draws distinct styles for the two tracks", () => {
        // the fig4 panel must contain both the black reference and the red
        // full-model curve pixels
        const table = parseCsv(readFileSync(csvPath.fig4, "utf-8"));
        validatePanel(table, "fig4");
        const raster = renderPanel(table, "fig4", 1.0);
        let black = 0;
        let red = 0;
        for (let i = 0; i < raster.data.length; i += 4) {
            const [r, g, b] = [raster.data[i], raster.data[i + 1], raster.data[i + 2]];
            if (r === 20 && g === 20 && b === 20) black++;
            if (r === 205 && g === 40 && b === 40) red++;
        }
        expect(black).toBeGreaterThan(100);
        expect(red).toBeGreaterThan(100);
    });
});

describe("header contract", () => {
    it("rejects a shuffled header and writes no file", () => {
        const lines = readFileSync(csvPath.fig3, "utf-8").split("\n");
        const header = lines[0].split(",");
        [header[1], header[2]] = [header[2], header[1]];
        const shuffled = join(dir, "shuffled.csv");
        writeFileSync(shuffled, [header.join(","), ...lines.slice(1)].join("\n"));
        const out = join(dir, "shuffled.png");
        expect(main([shuffled, "--panel", "fig3", "--out", out])).toBe(1);
        expect(existsSync(out)).toBe(false);
    });

    it("rejects a fig4 CSV presented as fig3", () => {
        const out = join(dir, "wrong-panel.png");
        expect(main([csvPath.fig4, "--panel", "fig3", "--out", out])).toBe(1);
        expect(existsSync(out)).toBe(false);
    });

    it("rejects missing and extra columns", () => {
        const table = parseCsv("t,D_markov\n0,1\n");
        expect(() => validatePanel(table, "fig4")).toThrow(/header mismatch/);
        const extra = parseCsv("t,D_markov,D_full,C_markov,C_full,bonus\n0,1,1,1,1,1\n");
        expect(() => validatePanel(extra, "fig4")).toThrow(/header mismatch/);
    });
});

describe("csv parsing", () => {
    it("rejects an empty csv", () => {
        expect(() => parseCsv("")).toThrow(/empty CSV/);
        expect(() => parseCsv("t,x\n")).toThrow(/empty CSV/);
    });

    it("rejects ragged and non-numeric rows", () => {
        expect(() => parseCsv("t,x\n0\n")).toThrow(/expected 2 cells/);
        expect(() => parseCsv("t,x\n0,fast\n")).toThrow(/non-numeric/);
    });

    it("reads columns by name", () => {
        const table = parseCsv("t,x\n0,1\n1,2\n");
        expect(column(table, "x")).toEqual([1, 2]);
        expect(() => column(table, "y")).toThrow(/missing column/);
    });

    it("knows the three panel column sets", () => {
        expect(PANEL_COLUMNS.fig3).toHaveLength(7);
        expect(PANEL_COLUMNS.fig4).toHaveLength(5);
        expect(PANEL_COLUMNS.fig5).toHaveLength(4);
    });
});

describe("argument parsing", () => {
    it("requires csv, panel and out", () => {
        expect(() => parseArgs([])).toThrow(/usage/);
        expect(() => parseArgs(["a.csv"])).toThrow(/--panel/);
        expect(() => parseArgs(["a.csv", "--panel", "fig9", "--out", "x.png"])).toThrow(/--panel/);
        expect(() => parseArgs(["a.csv", "--panel", "fig3"])).toThrow(/--out/);
        expect(() => parseArgs(["a.csv", "--panel", "fig3", "--out", "x.png", "--wat"]))
            .toThrow(/unknown option/);
    });

    it("parses pulse time overrides", () => {
        const args = parseArgs(["a.csv", "--panel", "fig3", "--out", "x.png", "--pulse-time", "2.5"]);
        expect(args.pulseTime).toBe(2.5);
        const none = parseArgs(["a.csv", "--panel", "fig3", "--out", "x.png", "--pulse-time", "none"]);
        expect(none.pulseTime).toBeNull();
    });

    it("run() raises on a missing file", () => {
        expect(() => run(["/nonexistent.csv", "--panel", "fig3", "--out", "/tmp/x.png"]))
            .toThrow();
    });
});

describe("png encoder", () => {
    it("round-trips dimensions and rejects bad buffers", () => {
        const raster = new Raster(33, 17);
        raster.fillRect(0, 0, 33, 17, [1, 2, 3]);
        const buf = encodePng(raster.width, raster.height, raster.data);
        expect(pngDims(buf)).toEqual([33, 17]);
        expect(() => encodePng(10, 10, new Uint8Array(3))).toThrow(/does not match/);
    });
});
