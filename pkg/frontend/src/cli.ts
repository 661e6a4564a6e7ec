#!/usr/bin/env node
// render_figs <csv> --panel fig3|fig4|fig5 --out <png> [--pulse-time t]
import { readFileSync, realpathSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";

import { parseCsv, validatePanel, PANEL_COLUMNS, type Panel } from "./csv.js";
import { encodePng } from "./png.js";
import { renderPanel } from "./render.js";

export interface Args {
    csv: string;
    panel: Panel;
    out: string;
    pulseTime: number | null;
}

export function parseArgs(argv: string[]): Args {
    let csv: string | null = null;
    let panel: string | null = null;
    let out: string | null = null;
    let pulseTime: number | null = 1.0;
    for (let i = 0; i < argv.length; i++) {
        const a = argv[i];
        if (a === "--panel") panel = argv[++i];
        else if (a === "--out") out = argv[++i];
        else if (a === "--pulse-time") {
            const raw = argv[++i];
            pulseTime = raw === "none" ? null : Number(raw);
            if (pulseTime !== null && !Number.isFinite(pulseTime)) {
                throw new Error(`bad --pulse-time value: ${raw}`);
            }
        } else if (a.startsWith("--")) {
            throw new Error(`unknown option ${a}`);
        } else if (csv === null) {
            csv = a;
        } else {
            throw new Error(`unexpected argument ${a}`);
        }
    }
    if (!csv) throw new Error("usage: render_figs <csv> --panel fig3|fig4|fig5 --out <png>");
    if (!panel || !(panel in PANEL_COLUMNS)) {
        throw new Error(`--panel must be one of ${Object.keys(PANEL_COLUMNS).join("|")}`);
    }
    if (!out) throw new Error("--out <png> is required");
    return { csv, panel: panel as Panel, out, pulseTime };
}

export function run(argv: string[]): void {
    const args = parseArgs(argv);
    const table = parseCsv(readFileSync(args.csv, "utf-8"));
    validatePanel(table, args.panel);
    const raster = renderPanel(table, args.panel, args.pulseTime);
    writeFileSync(args.out, encodePng(raster.width, raster.height, raster.data));
}

export function main(argv: string[]): number {
    try {
        run(argv);
        return 0;
    } catch (err) {
        console.error(`render_figs: ${err instanceof Error ? err.message : err}`);
        return 1;
    }
}

const entryUrl = process.argv[1] ? pathToFileURL(realpathSync(process.argv[1])).href : "";
if (import.meta.url === entryUrl) {
    process.exit(main(process.argv.slice(2)));
}
