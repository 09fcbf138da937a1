// Banner import plugin. Generated sections are marked below; the helper
// functions are fixed.

const imageList = {{IMAGE_LIST}};

const WEIGHT_STYLES = { normal: "Regular", bold: "Bold", black: "Black" };

function hexToPaint(hex, opacity) {
  const v = hex.replace("#", "");
  const r = parseInt(v.slice(0, 2), 16) / 255;
  const g = parseInt(v.slice(2, 4), 16) / 255;
  const b = parseInt(v.slice(4, 6), 16) / 255;
  const a = v.length === 8 ? parseInt(v.slice(6, 8), 16) / 255 : 1;
  return { type: "SOLID", color: { r, g, b }, opacity: a * (opacity === undefined ? 1 : opacity) };
}

async function loadFont(family, weight) {
  const style = WEIGHT_STYLES[weight] || "Regular";
  try {
    await figma.loadFontAsync({ family, style });
    return { family, style };
  } catch (e) {
    await figma.loadFontAsync({ family: "Inter", style: "Regular" });
    return { family: "Inter", style: "Regular" };
  }
}

async function imagePaint(name) {
  const bytes = await figma.clientStorage.getAsync(name);
  if (!bytes) {
    figma.notify("missing image " + name);
    return null;
  }
  const image = figma.createImage(bytes);
  return { type: "IMAGE", imageHash: image.hash, scaleMode: "FILL" };
}

async function createBackground(frame, spec) {
  const rect = figma.createRectangle();
  rect.name = spec.id;
  rect.resize(spec.width, spec.height);
  rect.x = 0;
  rect.y = 0;
  const paint = await imagePaint(spec.image);
  if (paint) rect.fills = [paint];
  frame.appendChild(rect);
  return rect;
}

async function createText(frame, spec) {
  const node = figma.createText();
  node.name = spec.id;
  node.fontName = await loadFont(spec.fontFamily, spec.fontWeight);
  node.characters = spec.lines.join("\n");
  node.fontSize = spec.fontSize;
  node.letterSpacing = { value: spec.letterSpacing, unit: "PIXELS" };
  node.textAlignHorizontal = spec.align;
  node.fills = [hexToPaint(spec.fill)];
  node.textAutoResize = "NONE";
  node.resize(Math.max(1, spec.width), Math.max(1, spec.height));
  node.x = spec.x;
  node.y = spec.y;
  node.opacity = spec.opacity;
  frame.appendChild(node);
  return node;
}

async function createButton(frame, spec) {
  const rect = figma.createRectangle();
  rect.resize(spec.width, spec.height);
  rect.cornerRadius = spec.cornerRadius;
  rect.fills = [hexToPaint(spec.fill)];
  if (spec.stroke) {
    rect.strokes = [hexToPaint(spec.stroke.color)];
    rect.strokeWeight = spec.stroke.width;
  }
  const label = figma.createText();
  label.fontName = await loadFont(spec.fontFamily, spec.fontWeight);
  label.characters = spec.label;
  label.fontSize = spec.fontSize;
  label.fills = [hexToPaint(spec.labelFill)];
  label.textAlignHorizontal = "CENTER";
  label.textAlignVertical = "CENTER";
  label.textAutoResize = "NONE";
  label.resize(spec.width, spec.height);
  const group = figma.group([rect, label], frame);
  group.name = spec.id;
  group.x = spec.x;
  group.y = spec.y;
  group.opacity = spec.opacity;
  return group;
}

async function createLogo(frame, spec) {
  const rect = figma.createRectangle();
  rect.name = spec.id;
  rect.resize(spec.width, spec.height);
  rect.x = spec.x;
  rect.y = spec.y;
  const paint = await imagePaint(spec.image);
  if (paint) rect.fills = [Object.assign(paint, { scaleMode: "FIT" })];
  rect.opacity = spec.opacity;
  frame.appendChild(rect);
  return rect;
}

async function createShape(frame, spec) {
  let node;
  if (spec.variant === "ellipse") {
    node = figma.createEllipse();
    node.resize(spec.width, spec.height);
  } else if (spec.variant === "line") {
    node = figma.createVector();
    node.vectorPaths = [{ windingRule: "NONE", data: spec.path }];
    node.strokes = [hexToPaint(spec.stroke ? spec.stroke.color : spec.fill)];
    node.strokeWeight = spec.stroke ? spec.stroke.width : 1;
  } else {
    node = figma.createRectangle();
    node.resize(spec.width, spec.height);
    node.cornerRadius = spec.cornerRadius;
  }
  node.name = spec.id;
  if (spec.variant !== "line") {
    node.fills = [hexToPaint(spec.fill)];
    if (spec.stroke) {
      node.strokes = [hexToPaint(spec.stroke.color)];
      node.strokeWeight = spec.stroke.width;
    }
  }
  node.x = spec.x;
  node.y = spec.y;
  node.opacity = spec.opacity;
  frame.appendChild(node);
  return node;
}

async function main() {
  const frame = figma.createFrame();
  frame.name = {{FRAME_NAME}};
  frame.resize({{CANVAS_WIDTH}}, {{CANVAS_HEIGHT}});
  frame.clipsContent = true;

  // -- elements --
{{ELEMENTS}}
  // -- end elements --

  figma.currentPage.selection = [frame];
  figma.viewport.scrollAndZoomIntoView([frame]);
}

main().then(() => figma.closePlugin()).catch((e) => figma.closePlugin("failed: " + e.message));
