/** Parsing for the plot-data CSV series served at /plotdata/<name>. */
/** Split one CSV line, honoring double-quoted fields. */
function splitLine(line) {
    if (!line.includes('"'))
        return line.split(",");
    const fields = [];
    let cur = "";
    let quoted = false;
    for (let i = 0; i < line.length; i++) {
        const ch = line[i];
        if (quoted) {
            if (ch === '"' && line[i + 1] === '"') {
                cur += '"';
                i++;
            }
            else if (ch === '"') {
                quoted = false;
            }
            else {
                cur += ch;
            }
        }
        else if (ch === '"') {
            quoted = true;
        }
        else if (ch === ",") {
            fields.push(cur);
            cur = "";
        }
        else {
            cur += ch;
        }
    }
    fields.push(cur);
    return fields;
}
export function parsePlotCsv(name, text) {
    const lines = text.split("\n").filter((ln) => ln.length > 0);
    if (lines.length === 0)
        return { name, header: [], rows: [] };
    const header = splitLine(lines[0]);
    const rows = lines.slice(1).map(splitLine);
    return { name, header, rows };
}
/** One column as numbers; the server writes full-precision float reprs. */
export function numericColumn(series, index) {
    return series.rows.map((row) => Number(row[index]));
}
