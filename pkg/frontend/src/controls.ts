/** Parameter controls. Every control's value round-trips through the
 * /run payload unchanged: empty inputs mean "server default" and are
 * omitted from the config fragment entirely. */
import { METHODS, Method, RunConfig } from "./state.js";

interface NumberSpec {
  key: Exclude<keyof RunConfig, "method" | "percentile_mode" | "on_ratios">;
  label: string;
  step: string;
}

const NUMBER_SPECS: NumberSpec[] = [
  { key: "hb_u", label: "size weight U", step: "0.1" },
  { key: "hb_c", label: "interval width C", step: "0.5" },
  { key: "hb_a", label: "width floor A", step: "0.01" },
  { key: "box_c", label: "whisker factor c", step: "0.1" },
  { key: "q", label: "subsample q", step: "1" },
  { key: "ntrees", label: "trees", step: "50" },
  { key: "u0", label: "score cutoff u0", step: "0.05" },
  { key: "delta", label: "radius delta", step: "any" },
  { key: "g", label: "min cluster size g", step: "1" },
  { key: "k", label: "neighbors k", step: "1" },
  { key: "epsilon", label: "gap fraction", step: "0.05" },
  { key: "knn_threshold", label: "score threshold", step: "any" },
  { key: "seed", label: "seed", step: "1" },
];

export interface ControlsHandle {
  read(): RunConfig;
  /** Write a delta proposal into the control and its echo. */
  setDelta(value: number): void;
  setConfig(config: RunConfig): void;
}

function labelled(text: string, input: HTMLElement): HTMLLabelElement {
  const label = document.createElement("label");
  const span = document.createElement("span");
  span.textContent = text;
  label.appendChild(span);
  label.appendChild(input);
  return label;
}

export function buildControls(
  root: HTMLElement,
  initial: RunConfig,
  onChange: (config: RunConfig) => void,
): ControlsHandle {
  root.replaceChildren();

  const methodSelect = document.createElement("select");
  methodSelect.id = "ctl-method";
  for (const method of METHODS) {
    const option = document.createElement("option");
    option.value = method;
    option.textContent = method;
    methodSelect.appendChild(option);
  }
  root.appendChild(labelled("method", methodSelect));

  const modeSelect = document.createElement("select");
  modeSelect.id = "ctl-percentile_mode";
  for (const mode of ["", "quartiles", "deciles"]) {
    const option = document.createElement("option");
    option.value = mode;
    option.textContent = mode === "" ? "(default)" : mode;
    modeSelect.appendChild(option);
  }
  root.appendChild(labelled("percentiles", modeSelect));

  const numberInputs = new Map<NumberSpec["key"], HTMLInputElement>();
  for (const spec of NUMBER_SPECS) {
    const input = document.createElement("input");
    input.type = "number";
    input.step = spec.step;
    input.id = `ctl-${spec.key}`;
    numberInputs.set(spec.key, input);
    const wrap = labelled(spec.label, input);
    if (spec.key === "delta") {
      const echo = document.createElement("span");
      echo.id = "delta-echo";
      echo.className = "delta-echo";
      wrap.appendChild(echo);
    }
    root.appendChild(wrap);
  }

  const onRatios = document.createElement("input");
  onRatios.type = "checkbox";
  onRatios.id = "ctl-on_ratios";
  root.appendChild(labelled("score raw ratios", onRatios));

  const read = (): RunConfig => {
    const config: RunConfig = { method: methodSelect.value as Method };
    if (modeSelect.value === "quartiles" || modeSelect.value === "deciles") {
      config.percentile_mode = modeSelect.value;
    }
    for (const [key, input] of numberInputs) {
      if (input.value === "") continue;
      const value = Number(input.value);
      if (Number.isFinite(value)) config[key] = value;
    }
    if (onRatios.checked) config.on_ratios = true;
    return config;
  };

  const echoDelta = (): void => {
    const echo = root.querySelector("#delta-echo");
    const input = numberInputs.get("delta")!;
    if (echo) echo.textContent = input.value === "" ? "" : `= ${input.value}`;
  };

  const setConfig = (config: RunConfig): void => {
    methodSelect.value = config.method;
    modeSelect.value = config.percentile_mode ?? "";
    for (const [key, input] of numberInputs) {
      const value = config[key];
      input.value = value === undefined ? "" : String(value);
    }
    onRatios.checked = config.on_ratios === true;
    echoDelta();
  };
  setConfig(initial);

  root.addEventListener("change", () => {
    echoDelta();
    onChange(read());
  });

  return {
    read,
    setConfig,
    setDelta: (value: number) => {
      const input = numberInputs.get("delta")!;
      input.value = String(value);
      echoDelta();
      onChange(read());
    },
  };
}
