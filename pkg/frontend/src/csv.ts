// CSV contract: header row + numeric columns, exactly the panel's column set.
export type Panel = "fig3" | "fig4" | "fig5";

export const PANEL_COLUMNS: Record<Panel, string[]> = {
    fig3: ["t", "sx_markov", "sy_markov", "sz_markov", "sx_full", "sy_full", "sz_full"],
    fig4: ["t", "D_markov", "D_full", "C_markov", "C_full"],
    fig5: ["t", "D_direct", "D_delayed", "C_atom_cavity_delayed"],
};

export interface Table {
    columns: string[];
    // column-major numeric data
    data: number[][];
}

export function parseCsv(text: string): Table {
    const lines = text.split("\n").filter((line) => line.trim().length > 0);
    if (lines.length < 2) {
        throw new Error("empty CSV: need a header row and at least one data row");
    }
    const columns = lines[0].split(",").map((c) => c.trim());
    const data: number[][] = columns.map(() => []);
    for (let i = 1; i < lines.length; i++) {
        const cells = lines[i].split(",");
        if (cells.length !== columns.length) {
            throw new Error(`row ${i + 1}: expected ${columns.length} cells, got ${cells.length}`);
        }
        for (let c = 0; c < cells.length; c++) {
            const v = Number(cells[c]);
            if (!Number.isFinite(v)) {
                throw new Error(`row ${i + 1}, column ${columns[c]}: non-numeric cell ${cells[c]!.trim()}`);
            }
            data[c].push(v);
        }
    }
    return { columns, data };
}

export function validatePanel(table: Table, panel: Panel): void {
    const expected = PANEL_COLUMNS[panel];
    if (!expected) {
        throw new Error(`unknown panel ${panel}`);
    }
    const got = table.columns;
    if (got.length !== expected.length || expected.some((name, i) => got[i] !== name)) {
        throw new Error(
            `header mismatch for ${panel}: expected [${expected.join(",")}], got [${got.join(",")}]`,
        );
    }
}

export function column(table: Table, name: string): number[] {
    const idx = table.columns.indexOf(name);
    if (idx < 0) throw new Error(`missing column ${name}`);
    return table.data[idx];
}
